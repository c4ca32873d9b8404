// SPDX-License-Identifier: Apache-2.0
//
// cellloc - Bayesian location estimation of mobile devices from cell plans
// Copyright (C) 2026 The cellloc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------


#include "cellloc/pipeline.hpp"

#include <cmath>

namespace cellloc
{

TileDistribution make_prior(PriorKind kind, const MixtureWeights& pi, const Grid& grid,
                            const std::optional<LandUseTable>& landuse, const SparseField& dominance)
{
  auto need_landuse = [&]() -> const LandUseTable& {
    if (!landuse)
      throw DomainError("the land use prior needs a land use table");
    return *landuse;
  };
  switch (kind)
  {
  case PriorKind::uniform:
    return uniform_prior(grid);
  case PriorKind::landuse:
    return landuse_prior(need_landuse(), grid);
  case PriorKind::network:
    return network_prior(dominance);
  case PriorKind::composite:
  {
    pi.check();
    const auto uniform = uniform_prior(grid);
    // Components with zero weight are not built, so they cannot fail.
    const auto land = pi.landuse > 0.0 ? landuse_prior(need_landuse(), grid) : uniform;
    const auto net = pi.network > 0.0 ? network_prior(dominance) : uniform;
    return composite_prior(pi, uniform, land, net);
  }
  }
  return uniform_prior(grid);
}

LikelihoodField make_likelihood(LikelihoodKind kind, const Fields& fields, const CellPlan& plan,
                                const Grid& grid, double voronoi_shift, int threads)
{
  if (kind == LikelihoodKind::voronoi)
    return voronoi_likelihood(voronoi_assign(plan, grid, voronoi_shift, threads));
  return connection_likelihood(fields.dominance);
}

std::vector<TaPosterior> ta_update_all(const Posterior& post, const TaSettings& ta,
                                       const Grid& grid, const CellPlan& plan)
{
  const TimingAdvanceSpec spec{ta.tau, ta.band_width, ta.merge};
  std::vector<TaPosterior> out;
  if (ta.cell)
  {
    out.push_back(ta_update(post, *ta.cell, spec, grid, plan));
    return out;
  }
  for (const auto& cp : post.cells)
    if (!cp.empty)
      out.push_back(ta_update(post, cp.cell, spec, grid, plan));
  return out;
}

void check_distribution(const TileDistribution& d, const char* what)
{
  if (!d.valid(1e-9))
    throw InvariantError(std::string(what) + " prior does not sum to 1");
}

void check_likelihood(const LikelihoodField& l)
{
  for (const double s : l.row_sums())
    if (s != 0.0 && std::abs(s - 1.0) > 1e-9)
      throw InvariantError("likelihood row does not sum to 1");
}

void check_posterior(const Posterior& p)
{
  for (const auto& cp : p.cells)
    if (!cp.empty && std::abs(cp.sum() - 1.0) > 1e-9)
      throw InvariantError("posterior of cell '" + cp.cell + "' does not sum to 1");
}

} // namespace cellloc
