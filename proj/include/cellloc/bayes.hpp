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

#include "cellloc/cellplan.hpp"
#include "cellloc/geo.hpp"
#include "cellloc/priors.hpp"
#include "cellloc/propagation.hpp"
#include "cellloc/voronoi.hpp"

#include <string>
#include <vector>

namespace cellloc
{

// Prob(a | g) stored cell-major like the dominance field it comes from. For
// every tile with at least one entry the entries over all cells sum to 1;
// tiles no cell reaches have none.
struct LikelihoodField
{
  SparseField field;

  // Sum over cells for every tile, 0 where the tile has no entry.
  std::vector<double> row_sums() const;
};

enum class LikelihoodKind
{
  strength,
  voronoi
};

LikelihoodKind parse_likelihood_kind(const std::string& s);
const char* to_string(LikelihoodKind k) noexcept;

// Row-normalized dominance.
LikelihoodField connection_likelihood(const SparseField& dominance);

// One-hot rows from a tessellation.
LikelihoodField voronoi_likelihood(const Tessellation& tess);

// Location distribution of one cell; `empty` when the cell has no support.
struct CellPosterior
{
  std::string cell;
  std::vector<FieldEntry> probs; // positive entries, ascending tile
  bool empty = false;

  double at(TileId t) const noexcept;
  double sum() const noexcept;
};

struct Posterior
{
  std::int64_t n_tiles = 0;
  std::vector<CellPosterior> cells;

  // Throws RangeError for an unknown cell.
  const CellPosterior& of(const std::string& cell) const;
};

// Prob(g | a) proportional to Prob(g) Prob(a | g), per cell. Throws
// MismatchError when prior and likelihood cover different grids.
Posterior posterior(const TileDistribution& prior, const LikelihoodField& likelihood,
                    int threads = 0);

inline constexpr int max_timing_advance = 1282;
inline constexpr double default_ta_band_width = 78.12;

struct TimingAdvanceSpec
{
  int tau = 0;
  double band_width = default_ta_band_width;
  int merge = 1; // bands merged on each side of tau

  // Throws RangeError for tau outside [0, 1282], DomainError for a
  // non-positive band width or negative merge.
  void check() const;

  // Bands tau - merge ... tau + merge as one annulus around `center`.
  Annulus annulus(Point2 center) const;
};

struct TaPosterior
{
  std::string cell;
  int tau = 0;
  std::vector<FieldEntry> probs;
  bool empty = false; // no posterior mass inside the annulus

  double at(TileId t) const noexcept;
};

// Masks the posterior of `cell` by the tiles whose centroids fall in the
// merged annulus around the cell, and renormalizes.
TaPosterior ta_update(const Posterior& post, const std::string& cell, const TimingAdvanceSpec& spec,
                      const Grid& grid, const CellPlan& plan);

} // namespace cellloc
