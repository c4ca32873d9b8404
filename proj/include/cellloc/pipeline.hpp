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


#pragma once

#include "cellloc/bayes.hpp"
#include "cellloc/config.hpp"
#include "cellloc/priors.hpp"
#include "cellloc/propagation.hpp"
#include "cellloc/voronoi.hpp"

#include <optional>

namespace cellloc
{

// A computed artifact violates one of its invariants.
class InvariantError : public Error
{
public:
  using Error::Error;
};

// Builds any of the four priors. The land-use table may be absent only when
// it is not needed (landuse kind, or composite with a positive land-use
// weight, require it).
TileDistribution make_prior(PriorKind kind, const MixtureWeights& pi, const Grid& grid,
                            const std::optional<LandUseTable>& landuse, const SparseField& dominance);

LikelihoodField make_likelihood(LikelihoodKind kind, const Fields& fields, const CellPlan& plan,
                                const Grid& grid, double voronoi_shift, int threads = 0);

// Timing Advance update for one cell or, when `cell` is empty, every cell
// with a non-empty posterior, in cell-plan order.
std::vector<TaPosterior> ta_update_all(const Posterior& post, const TaSettings& ta,
                                       const Grid& grid, const CellPlan& plan);

// Throws InvariantError when a distribution does not sum to 1 within 1e-9.
void check_distribution(const TileDistribution& d, const char* what);
void check_likelihood(const LikelihoodField& l);
void check_posterior(const Posterior& p);

} // namespace cellloc
