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


#include "cellloc/propagation.hpp"

#include "cellloc/error.hpp"
#include "cellloc/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace cellloc
{

void DominanceParams::check() const
{
  if (!std::isfinite(s_mid))
    throw DomainError("S_mid: must be finite");
  if (!(s_steep > 0.0) || !std::isfinite(s_steep))
    throw DomainError("S_steep: must be positive");
  if (!(min_dominance >= 0.0 && min_dominance < 1.0))
    throw DomainError("min_dominance: must lie in [0, 1)");
}

RadiationPattern::RadiationPattern(double max_loss, double sigma) : max_loss_(max_loss), sigma_(sigma)
{
  if (!(sigma > 0.0))
    throw DomainError("radiation pattern: sigma must be positive");
}

double RadiationPattern::loss(double angle) const noexcept
{
  return max_loss_ - max_loss_ * std::exp(-(angle * angle) / (2.0 * sigma_ * sigma_));
}

RadiationPattern fit_pattern(double half_width, double max_loss)
{
  if (!(half_width > 0.0 && half_width < 180.0))
    throw DomainError("radiation pattern: half width must lie in (0, 180)");
  if (!(max_loss > 3.0))
    throw InfeasibleError("radiation pattern: maximum loss must exceed 3 dB");
  // c - c exp(-h^2 / 2s^2) = 3  <=>  s = h / sqrt(2 ln(c / (c - 3)))
  const double sigma = half_width / std::sqrt(2.0 * std::log(max_loss / (max_loss - 3.0)));
  return {max_loss, sigma};
}

double dbm_from_watt(double watt)
{
  if (!(watt > 0.0))
    throw DomainError("power must be positive, got " + std::to_string(watt) + " W");
  return 30.0 + 10.0 * std::log10(watt);
}

double distance_loss(double r, double gamma)
{
  return 10.0 * gamma * std::log10(r);
}

LinkGeometry link_geometry(const Cell& cell, const Grid& grid, TileId t)
{
  const Point2 c = grid.centroid(t);
  const double tile_elev = grid.elevation(t);
  const double ground = grid.elevation_at(cell.position());
  const double height = cell.height.value_or(0.0);

  LinkGeometry geo;
  geo.r = distance_3d(c, tile_elev, cell.position(), height, ground);
  if (cell.is_directional())
  {
    geo.delta = azimuth_offset(bearing(cell.position(), c), cell.azimuth.value_or(0.0));
    const double horizontal = std::hypot(c.x - cell.x, c.y - cell.y);
    geo.epsilon = elevation_offset(horizontal, ground + height - tile_elev, cell.tilt.value_or(0.0));
  }
  return geo;
}

double signal_strength(const Cell& cell, const LinkGeometry& geo, const PatternParams& patterns)
{
  double s = dbm_from_watt(cell.power.value()) - distance_loss(geo.r, cell.path_loss_exponent.value());
  if (cell.is_directional())
  {
    const auto azi = fit_pattern(cell.beam_h.value() / 2.0, patterns.azimuth_max_loss);
    const auto elev = fit_pattern(cell.beam_v.value() / 2.0, patterns.elevation_max_loss);
    s -= azi.loss(std::abs(geo.delta));
    s -= elev.loss(std::abs(geo.epsilon));
  }
  return s;
}

double dominance(double strength_dbm, const DominanceParams& params) noexcept
{
  return 1.0 / (1.0 + std::exp(-params.s_steep * (strength_dbm - params.s_mid)));
}

SignalQuality signal_quality(double s) noexcept
{
  if (s >= -70.0)
    return SignalQuality::excellent;
  if (s >= -90.0)
    return SignalQuality::good;
  if (s >= -100.0)
    return SignalQuality::fair;
  if (s > -110.0)
    return SignalQuality::poor;
  return SignalQuality::bad;
}

const char* to_string(SignalQuality q) noexcept
{
  switch (q)
  {
  case SignalQuality::excellent:
    return "excellent";
  case SignalQuality::good:
    return "good";
  case SignalQuality::fair:
    return "fair";
  case SignalQuality::poor:
    return "poor";
  case SignalQuality::bad:
    return "bad";
  }
  return "bad";
}

std::size_t SparseField::nnz() const noexcept
{
  std::size_t n = 0;
  for (const auto& col : columns)
    n += col.size();
  return n;
}

std::size_t SparseField::column_of(const std::string& cell) const
{
  const auto it = std::find(cell_ids.begin(), cell_ids.end(), cell);
  if (it == cell_ids.end())
    throw RangeError("unknown cell '" + cell + "'");
  return static_cast<std::size_t>(it - cell_ids.begin());
}

double SparseField::at(std::size_t column, TileId t) const noexcept
{
  if (column >= columns.size())
    return 0.0;
  const auto& col = columns[column];
  const auto it = std::lower_bound(col.begin(), col.end(), t,
                                   [](const FieldEntry& e, TileId v) { return e.tile < v; });
  return (it != col.end() && it->tile == t) ? it->value : 0.0;
}

SparseField SparseField::scaled(double k) const
{
  SparseField out = *this;
  for (auto& col : out.columns)
    for (auto& e : col)
      e.value *= k;
  return out;
}

namespace
{

constexpr double rad2deg = 180.0 / std::numbers::pi;

// Per-cell constants hoisted out of the tile loop.
class CellKernel
{
public:
  CellKernel(const Cell& cell, const Grid& grid, const PatternParams& patterns)
      : position_(cell.position()),
        antenna_z_(grid.elevation_at(cell.position()) + cell.height.value()),
        s0_(dbm_from_watt(cell.power.value())),
        loss_per_decade_(10.0 * cell.path_loss_exponent.value()),
        directional_(cell.is_directional())
  {
    if (directional_)
    {
      azimuth_ = cell.azimuth.value();
      tilt_ = cell.tilt.value();
      const auto azi = fit_pattern(cell.beam_h.value() / 2.0, patterns.azimuth_max_loss);
      const auto elev = fit_pattern(cell.beam_v.value() / 2.0, patterns.elevation_max_loss);
      azi_c_ = azi.max_loss();
      azi_inv_ = 1.0 / (2.0 * azi.sigma() * azi.sigma());
      elev_c_ = elev.max_loss();
      elev_inv_ = 1.0 / (2.0 * elev.sigma() * elev.sigma());
    }
  }

  // Strength at a tile centroid. The distance-only strength is an upper bound;
  // returns false without evaluating the patterns when `skip(bound)` holds.
  template <class Skip>
  bool eval(Point2 c, double tile_z, Skip&& skip, double& strength) const noexcept
  {
    const double dx = c.x - position_.x;
    const double dy = c.y - position_.y;
    const double dz = antenna_z_ - tile_z;
    const double h2 = dx * dx + dy * dy;
    double r = std::sqrt(h2 + dz * dz);
    if (r < 1.0)
      r = 1.0;
    const double bound = s0_ - loss_per_decade_ * std::log10(r);
    if (skip(bound))
      return false;
    double s = bound;
    if (directional_)
    {
      double b = std::atan2(dx, dy) * rad2deg;
      if (b < 0.0)
        b += 360.0;
      if (b >= 360.0)
        b -= 360.0;
      const double delta = wrap_degrees(b - azimuth_);
      const double eps = wrap_degrees(std::atan2(dz, std::sqrt(h2)) * rad2deg - tilt_);
      s -= azi_c_ - azi_c_ * std::exp(-(delta * delta) * azi_inv_);
      s -= elev_c_ - elev_c_ * std::exp(-(eps * eps) * elev_inv_);
    }
    strength = s;
    return true;
  }

private:
  Point2 position_;
  double antenna_z_;
  double s0_;
  double loss_per_decade_;
  bool directional_;
  double azimuth_ = 0.0;
  double tilt_ = 0.0;
  double azi_c_ = 0.0;
  double azi_inv_ = 0.0;
  double elev_c_ = 0.0;
  double elev_inv_ = 0.0;
};

std::vector<CellKernel> make_kernels(const CellPlan& plan, const Grid& grid,
                                     const PatternParams& patterns)
{
  std::vector<CellKernel> kernels;
  kernels.reserve(plan.cells.size());
  for (const auto& c : plan.cells)
    kernels.emplace_back(c, grid, patterns);
  return kernels;
}

std::vector<Point2> centroids(const Grid& grid)
{
  std::vector<Point2> out(static_cast<std::size_t>(grid.size()));
  for (TileId t = 0; t < grid.size(); ++t)
    out[static_cast<std::size_t>(t)] = grid.centroid(t);
  return out;
}

std::vector<std::string> ids_of(const CellPlan& plan)
{
  std::vector<std::string> ids;
  ids.reserve(plan.cells.size());
  for (const auto& c : plan.cells)
    ids.push_back(c.id);
  return ids;
}

} // namespace

Fields compute_fields(const CellPlan& plan, const Grid& grid, const DominanceParams& params,
                      const PatternParams& patterns, int threads)
{
  params.check();
  const auto kernels = make_kernels(plan, grid, patterns);
  const auto cents = centroids(grid);
  const auto& elev = grid.elevations();
  const auto n_cells = static_cast<std::int64_t>(kernels.size());
  const std::int64_t n_tiles = grid.size();

  Fields out;
  out.strength.n_tiles = out.dominance.n_tiles = n_tiles;
  out.strength.cell_ids = out.dominance.cell_ids = ids_of(plan);
  out.strength.columns.resize(kernels.size());
  out.dominance.columns.resize(kernels.size());

  const double min_dom = params.min_dominance;
  auto below = [&](double s) { return dominance(s, params) < min_dom; };

  // Each iteration writes only its own column, so the output is independent
  // of the schedule.
#pragma omp parallel for schedule(dynamic, 1) num_threads(resolve_threads(threads))
  for (std::int64_t a = 0; a < n_cells; ++a)
  {
    const auto& kernel = kernels[static_cast<std::size_t>(a)];
    auto& str_col = out.strength.columns[static_cast<std::size_t>(a)];
    auto& dom_col = out.dominance.columns[static_cast<std::size_t>(a)];
    for (std::int64_t t = 0; t < n_tiles; ++t)
    {
      double s;
      if (!kernel.eval(cents[static_cast<std::size_t>(t)], elev[static_cast<std::size_t>(t)], below, s))
        continue;
      const double d = dominance(s, params);
      if (d < min_dom)
        continue;
      str_col.push_back({t, s});
      dom_col.push_back({t, d});
    }
  }
  return out;
}

Fields compute_fields_reference(const CellPlan& plan, const Grid& grid,
                                const DominanceParams& params, const PatternParams& patterns)
{
  params.check();
  Fields out;
  out.strength.n_tiles = out.dominance.n_tiles = grid.size();
  out.strength.cell_ids = out.dominance.cell_ids = ids_of(plan);
  out.strength.columns.resize(plan.cells.size());
  out.dominance.columns.resize(plan.cells.size());
  for (std::size_t a = 0; a < plan.cells.size(); ++a)
  {
    for (TileId t = 0; t < grid.size(); ++t)
    {
      const double s = signal_strength(plan.cells[a], link_geometry(plan.cells[a], grid, t), patterns);
      const double d = dominance(s, params);
      if (d < params.min_dominance)
        continue;
      out.strength.columns[a].push_back({t, s});
      out.dominance.columns[a].push_back({t, d});
    }
  }
  return out;
}

StrengthMatrix compute_strength(const CellPlan& plan, const Grid& grid, const PatternParams& patterns,
                                int threads)
{
  const auto kernels = make_kernels(plan, grid, patterns);
  const auto cents = centroids(grid);
  const auto& elev = grid.elevations();
  const auto n_cells = static_cast<std::int64_t>(kernels.size());

  StrengthMatrix out;
  out.n_tiles = grid.size();
  out.cell_ids = ids_of(plan);
  out.columns.assign(kernels.size(), std::vector<double>(static_cast<std::size_t>(grid.size())));
  auto never = [](double) { return false; };

#pragma omp parallel for schedule(dynamic, 1) num_threads(resolve_threads(threads))
  for (std::int64_t a = 0; a < n_cells; ++a)
  {
    auto& col = out.columns[static_cast<std::size_t>(a)];
    for (std::size_t t = 0; t < col.size(); ++t)
      kernels[static_cast<std::size_t>(a)].eval(cents[t], elev[t], never, col[t]);
  }
  return out;
}

Fields threshold_fields(const StrengthMatrix& strength, const DominanceParams& params, int threads)
{
  params.check();
  const auto n_cells = static_cast<std::int64_t>(strength.columns.size());
  Fields out;
  out.strength.n_tiles = out.dominance.n_tiles = strength.n_tiles;
  out.strength.cell_ids = out.dominance.cell_ids = strength.cell_ids;
  out.strength.columns.resize(strength.columns.size());
  out.dominance.columns.resize(strength.columns.size());

#pragma omp parallel for schedule(dynamic, 1) num_threads(resolve_threads(threads))
  for (std::int64_t a = 0; a < n_cells; ++a)
  {
    const auto& col = strength.columns[static_cast<std::size_t>(a)];
    for (std::size_t t = 0; t < col.size(); ++t)
    {
      const double d = dominance(col[t], params);
      if (d < params.min_dominance)
        continue;
      out.strength.columns[static_cast<std::size_t>(a)].push_back({static_cast<TileId>(t), col[t]});
      out.dominance.columns[static_cast<std::size_t>(a)].push_back({static_cast<TileId>(t), d});
    }
  }
  return out;
}

} // namespace cellloc
