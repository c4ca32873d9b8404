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

#include "cellloc/geo.hpp"
#include "cellloc/propagation.hpp"

#include <string>
#include <vector>

namespace cellloc
{

// Dense probability vector over the tiles of a grid.
struct TileDistribution
{
  std::vector<double> probs;

  std::int64_t n_tiles() const noexcept { return static_cast<std::int64_t>(probs.size()); }
  double operator[](TileId t) const { return probs[static_cast<std::size_t>(t)]; }
  double sum() const noexcept;
  // Non-negative entries summing to 1 within `tol`.
  bool valid(double tol = 1e-9) const noexcept;
};

// Land-use classes with relative expected device counts, and the fraction of
// every tile covered by each class (row-major, n_tiles x n_classes).
class LandUseTable
{
public:
  // Rows summing to 1 within `tolerance` are renormalized; others are
  // rejected with a DomainError.
  LandUseTable(std::vector<std::string> classes, std::vector<double> weights,
               std::vector<double> fractions, double tolerance = 1e-6);

  const std::vector<std::string>& classes() const noexcept { return classes_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  std::size_t n_classes() const noexcept { return classes_.size(); }
  std::int64_t n_tiles() const noexcept;
  double fraction(TileId t, std::size_t k) const;

  // n(g) = sum_k u_k w_k(g)
  double expected_devices(TileId t) const;

  LandUseTable with_weights(std::vector<double> weights) const;

private:
  std::vector<std::string> classes_;
  std::vector<double> weights_;
  std::vector<double> fractions_;
};

struct MixtureWeights
{
  double uniform = 0.0;
  double landuse = 0.0;
  double network = 0.0;

  // Throws DomainError unless every weight is in [0, 1] and they sum to 1.
  void check() const;
};

enum class PriorKind
{
  uniform,
  landuse,
  network,
  composite
};

PriorKind parse_prior_kind(const std::string& s);
const char* to_string(PriorKind k) noexcept;

TileDistribution uniform_prior(const Grid& grid);

// Throws MismatchError when the table does not cover the grid,
// DegeneratePriorError when every tile has n(g) = 0.
TileDistribution landuse_prior(const LandUseTable& table, const Grid& grid);

// Per-tile dominance total, normalized. Throws DegeneratePriorError on a zero
// field.
TileDistribution network_prior(const SparseField& dominance);

TileDistribution composite_prior(const MixtureWeights& weights, const TileDistribution& uniform,
                                 const TileDistribution& landuse, const TileDistribution& network);

} // namespace cellloc
