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


#include "cellloc/priors.hpp"

#include "cellloc/error.hpp"

#include <cmath>
#include <numeric>

namespace cellloc
{

double TileDistribution::sum() const noexcept
{
  return std::accumulate(probs.begin(), probs.end(), 0.0);
}

bool TileDistribution::valid(double tol) const noexcept
{
  for (const double p : probs)
    if (!(p >= 0.0))
      return false;
  return std::abs(sum() - 1.0) <= tol;
}

LandUseTable::LandUseTable(std::vector<std::string> classes, std::vector<double> weights,
                           std::vector<double> fractions, double tolerance)
    : classes_(std::move(classes)), weights_(std::move(weights)), fractions_(std::move(fractions))
{
  const std::size_t k = classes_.size();
  if (k == 0)
    throw DomainError("land use: no classes");
  if (weights_.size() != k)
    throw DomainError("land use: one weight per class required");
  for (const double u : weights_)
    if (!(u >= 0.0) || !std::isfinite(u))
      throw DomainError("land use: class weights must be finite and non-negative");
  if (fractions_.size() % k != 0)
    throw DomainError("land use: fraction table is not n_tiles x n_classes");

  for (std::size_t row = 0; row * k < fractions_.size(); ++row)
  {
    double total = 0.0;
    for (std::size_t j = 0; j < k; ++j)
    {
      const double w = fractions_[row * k + j];
      if (!(w >= 0.0 && w <= 1.0))
        throw DomainError("land use: tile " + std::to_string(row) + " has a fraction outside [0, 1]");
      total += w;
    }
    if (std::abs(total - 1.0) > tolerance)
      throw DomainError("land use: fractions of tile " + std::to_string(row) + " sum to " +
                        std::to_string(total));
    if (total != 1.0)
      for (std::size_t j = 0; j < k; ++j)
        fractions_[row * k + j] /= total;
  }
}

std::int64_t LandUseTable::n_tiles() const noexcept
{
  return static_cast<std::int64_t>(fractions_.size() / classes_.size());
}

double LandUseTable::fraction(TileId t, std::size_t k) const
{
  if (t < 0 || t >= n_tiles() || k >= n_classes())
    throw RangeError("land use: index out of range");
  return fractions_[static_cast<std::size_t>(t) * n_classes() + k];
}

double LandUseTable::expected_devices(TileId t) const
{
  if (t < 0 || t >= n_tiles())
    throw RangeError("land use: tile " + std::to_string(t) + " out of range");
  const std::size_t k = n_classes();
  const double* row = fractions_.data() + static_cast<std::size_t>(t) * k;
  double n = 0.0;
  for (std::size_t j = 0; j < k; ++j)
    n += weights_[j] * row[j];
  return n;
}

LandUseTable LandUseTable::with_weights(std::vector<double> weights) const
{
  return LandUseTable(classes_, std::move(weights), fractions_);
}

void MixtureWeights::check() const
{
  for (const double w : {uniform, landuse, network})
    if (!(w >= 0.0 && w <= 1.0))
      throw DomainError("pi: each weight must lie in [0, 1]");
  if (std::abs(uniform + landuse + network - 1.0) > 1e-9)
    throw DomainError("pi: weights must sum to 1");
}

PriorKind parse_prior_kind(const std::string& s)
{
  if (s == "uniform")
    return PriorKind::uniform;
  if (s == "landuse" || s == "land_use" || s == "land-use")
    return PriorKind::landuse;
  if (s == "network")
    return PriorKind::network;
  if (s == "composite")
    return PriorKind::composite;
  throw DomainError("unknown prior kind '" + s + "'");
}

const char* to_string(PriorKind k) noexcept
{
  switch (k)
  {
  case PriorKind::uniform:
    return "uniform";
  case PriorKind::landuse:
    return "landuse";
  case PriorKind::network:
    return "network";
  case PriorKind::composite:
    return "composite";
  }
  return "uniform";
}

namespace
{

TileDistribution normalized(std::vector<double> mass, const char* what)
{
  const double total = std::accumulate(mass.begin(), mass.end(), 0.0);
  if (!(total > 0.0))
    throw DegeneratePriorError(std::string(what) + " prior has zero total mass");
  for (auto& m : mass)
    m /= total;
  return {std::move(mass)};
}

} // namespace

TileDistribution uniform_prior(const Grid& grid)
{
  const auto n = grid.size();
  return {std::vector<double>(static_cast<std::size_t>(n), 1.0 / static_cast<double>(n))};
}

TileDistribution landuse_prior(const LandUseTable& table, const Grid& grid)
{
  if (table.n_tiles() != grid.size())
    throw MismatchError("land use table covers " + std::to_string(table.n_tiles()) +
                        " tiles, grid has " + std::to_string(grid.size()));
  std::vector<double> n(static_cast<std::size_t>(grid.size()));
  for (TileId t = 0; t < grid.size(); ++t)
    n[static_cast<std::size_t>(t)] = table.expected_devices(t);
  return normalized(std::move(n), "land use");
}

TileDistribution network_prior(const SparseField& dominance)
{
  std::vector<double> mass(static_cast<std::size_t>(dominance.n_tiles), 0.0);
  for (const auto& col : dominance.columns)
    for (const auto& e : col)
      mass[static_cast<std::size_t>(e.tile)] += e.value;
  return normalized(std::move(mass), "network");
}

TileDistribution composite_prior(const MixtureWeights& weights, const TileDistribution& uniform,
                                 const TileDistribution& landuse, const TileDistribution& network)
{
  weights.check();
  const auto n = uniform.probs.size();
  if (landuse.probs.size() != n || network.probs.size() != n)
    throw MismatchError("composite prior: component priors cover different grids");
  std::vector<double> mix(n);
  for (std::size_t t = 0; t < n; ++t)
    mix[t] = weights.uniform * uniform.probs[t] + weights.landuse * landuse.probs[t] +
             weights.network * network.probs[t];
  // Absorbs floating-point drift only; the mixture of distributions sums to 1.
  return normalized(std::move(mix), "composite");
}

} // namespace cellloc
