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


#include "cellloc/bayes.hpp"

#include "cellloc/error.hpp"
#include "cellloc/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace cellloc
{

std::vector<double> LikelihoodField::row_sums() const
{
  std::vector<double> sums(static_cast<std::size_t>(field.n_tiles), 0.0);
  for (const auto& col : field.columns)
    for (const auto& e : col)
      sums[static_cast<std::size_t>(e.tile)] += e.value;
  return sums;
}

LikelihoodKind parse_likelihood_kind(const std::string& s)
{
  if (s == "strength")
    return LikelihoodKind::strength;
  if (s == "voronoi")
    return LikelihoodKind::voronoi;
  throw DomainError("unknown likelihood kind '" + s + "'");
}

const char* to_string(LikelihoodKind k) noexcept
{
  return k == LikelihoodKind::voronoi ? "voronoi" : "strength";
}

LikelihoodField connection_likelihood(const SparseField& dominance)
{
  std::vector<double> total(static_cast<std::size_t>(dominance.n_tiles), 0.0);
  for (const auto& col : dominance.columns)
    for (const auto& e : col)
      total[static_cast<std::size_t>(e.tile)] += e.value;

  LikelihoodField out;
  out.field.n_tiles = dominance.n_tiles;
  out.field.cell_ids = dominance.cell_ids;
  out.field.columns.resize(dominance.columns.size());
  for (std::size_t a = 0; a < dominance.columns.size(); ++a)
  {
    auto& dst = out.field.columns[a];
    dst.reserve(dominance.columns[a].size());
    for (const auto& e : dominance.columns[a])
      if (e.value > 0.0)
        dst.push_back({e.tile, e.value / total[static_cast<std::size_t>(e.tile)]});
  }
  return out;
}

LikelihoodField voronoi_likelihood(const Tessellation& tess)
{
  LikelihoodField out;
  out.field.n_tiles = tess.n_tiles();
  out.field.cell_ids = tess.cell_ids;
  out.field.columns.resize(tess.cell_ids.size());
  for (std::size_t t = 0; t < tess.owner.size(); ++t)
    if (tess.owner[t] != Tessellation::unassigned)
      out.field.columns[static_cast<std::size_t>(tess.owner[t])].push_back(
          {static_cast<TileId>(t), 1.0});
  return out;
}

namespace
{

double lookup(const std::vector<FieldEntry>& probs, TileId t) noexcept
{
  const auto it = std::lower_bound(probs.begin(), probs.end(), t,
                                   [](const FieldEntry& e, TileId v) { return e.tile < v; });
  return (it != probs.end() && it->tile == t) ? it->value : 0.0;
}

// Normalizes in ascending tile order; returns false on zero mass.
bool normalize(std::vector<FieldEntry>& probs)
{
  double total = 0.0;
  for (const auto& e : probs)
    total += e.value;
  if (!(total > 0.0))
  {
    probs.clear();
    return false;
  }
  for (auto& e : probs)
    e.value /= total;
  return true;
}

} // namespace

double CellPosterior::at(TileId t) const noexcept
{
  return lookup(probs, t);
}

double CellPosterior::sum() const noexcept
{
  double s = 0.0;
  for (const auto& e : probs)
    s += e.value;
  return s;
}

double TaPosterior::at(TileId t) const noexcept
{
  return lookup(probs, t);
}

const CellPosterior& Posterior::of(const std::string& cell) const
{
  const auto it =
      std::find_if(cells.begin(), cells.end(), [&](const CellPosterior& p) { return p.cell == cell; });
  if (it == cells.end())
    throw RangeError("unknown cell '" + cell + "'");
  return *it;
}

Posterior posterior(const TileDistribution& prior, const LikelihoodField& likelihood, int threads)
{
  if (prior.n_tiles() != likelihood.field.n_tiles)
    throw MismatchError("posterior: prior covers " + std::to_string(prior.n_tiles()) +
                        " tiles, likelihood " + std::to_string(likelihood.field.n_tiles));
  Posterior out;
  out.n_tiles = prior.n_tiles();
  const auto n_cells = static_cast<std::int64_t>(likelihood.field.cell_ids.size());
  out.cells.resize(static_cast<std::size_t>(n_cells));

#pragma omp parallel for schedule(dynamic, 1) num_threads(resolve_threads(threads))
  for (std::int64_t a = 0; a < n_cells; ++a)
  {
    auto& cp = out.cells[static_cast<std::size_t>(a)];
    cp.cell = likelihood.field.cell_ids[static_cast<std::size_t>(a)];
    for (const auto& e : likelihood.field.columns[static_cast<std::size_t>(a)])
    {
      const double m = prior.probs[static_cast<std::size_t>(e.tile)] * e.value;
      if (m > 0.0)
        cp.probs.push_back({e.tile, m});
    }
    cp.empty = !normalize(cp.probs);
  }
  return out;
}

void TimingAdvanceSpec::check() const
{
  if (tau < 0 || tau > max_timing_advance)
    throw RangeError("tau: must lie in [0, " + std::to_string(max_timing_advance) + "]");
  if (!(band_width > 0.0) || !std::isfinite(band_width))
    throw DomainError("band_width: must be positive");
  if (merge < 0)
    throw DomainError("b: must be non-negative");
}

Annulus TimingAdvanceSpec::annulus(Point2 center) const
{
  check();
  const int first = std::max(0, tau - merge);
  const int last = tau + merge;
  return {center, static_cast<double>(first) * band_width,
          static_cast<double>(last + 1) * band_width};
}

TaPosterior ta_update(const Posterior& post, const std::string& cell, const TimingAdvanceSpec& spec,
                      const Grid& grid, const CellPlan& plan)
{
  const auto& prior = post.of(cell);
  const Cell* c = plan.find(cell);
  if (c == nullptr)
    throw RangeError("unknown cell '" + cell + "'");
  const Annulus ann = spec.annulus(c->position());

  TaPosterior out;
  out.cell = cell;
  out.tau = spec.tau;
  for (const auto& e : prior.probs)
    if (annulus_contains(ann, grid.centroid(e.tile)))
      out.probs.push_back(e);
  out.empty = !normalize(out.probs);
  return out;
}

} // namespace cellloc
