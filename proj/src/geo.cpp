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


#include "cellloc/geo.hpp"

#include "cellloc/error.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace cellloc
{

namespace
{
constexpr double rad2deg = 180.0 / std::numbers::pi;
} // namespace

Grid::Grid(Point2 origin, double tile_size, std::int64_t n_cols, std::int64_t n_rows)
    : Grid(origin, tile_size, n_cols, n_rows, {})
{
}

Grid::Grid(Point2 origin, double tile_size, std::int64_t n_cols, std::int64_t n_rows,
           std::vector<double> elevation)
    : origin_(origin), tile_size_(tile_size), n_cols_(n_cols), n_rows_(n_rows),
      elevation_(std::move(elevation))
{
  if (!(tile_size > 0.0) || !std::isfinite(tile_size))
    throw DomainError("grid: tile_size must be positive");
  if (n_cols < 1 || n_rows < 1)
    throw DomainError("grid: n_cols and n_rows must be at least 1");
  if (!std::isfinite(origin.x) || !std::isfinite(origin.y))
    throw DomainError("grid: origin must be finite");
  if (elevation_.empty())
    elevation_.assign(static_cast<std::size_t>(size()), 0.0);
  else if (static_cast<std::int64_t>(elevation_.size()) != size())
    throw MismatchError("grid: elevation has " + std::to_string(elevation_.size()) +
                        " values for " + std::to_string(size()) + " tiles");
}

std::int64_t Grid::row(TileId t) const
{
  if (!contains(t))
    throw RangeError("tile " + std::to_string(t) + " outside grid of " + std::to_string(size()) +
                     " tiles");
  return t / n_cols_;
}

std::int64_t Grid::col(TileId t) const
{
  if (!contains(t))
    throw RangeError("tile " + std::to_string(t) + " outside grid of " + std::to_string(size()) +
                     " tiles");
  return t % n_cols_;
}

TileId Grid::tile_at(std::int64_t r, std::int64_t c) const
{
  if (r < 0 || r >= n_rows_ || c < 0 || c >= n_cols_)
    throw RangeError("row/col (" + std::to_string(r) + ", " + std::to_string(c) +
                     ") outside grid");
  return r * n_cols_ + c;
}

std::optional<TileId> Grid::locate(Point2 p) const noexcept
{
  const double fc = std::floor((p.x - origin_.x) / tile_size_);
  const double fr = std::floor((p.y - origin_.y) / tile_size_);
  if (!(fc >= 0.0 && fr >= 0.0 && fc < static_cast<double>(n_cols_) &&
        fr < static_cast<double>(n_rows_)))
    return std::nullopt;
  return static_cast<std::int64_t>(fr) * n_cols_ + static_cast<std::int64_t>(fc);
}

Point2 Grid::centroid(TileId t) const
{
  const auto r = row(t);
  const auto c = t % n_cols_;
  return {origin_.x + (static_cast<double>(c) + 0.5) * tile_size_,
          origin_.y + (static_cast<double>(r) + 0.5) * tile_size_};
}

double Grid::elevation(TileId t) const
{
  if (!contains(t))
    throw RangeError("tile " + std::to_string(t) + " outside grid");
  return elevation_[static_cast<std::size_t>(t)];
}

double Grid::elevation_at(Point2 p) const noexcept
{
  const auto t = locate(p);
  return t ? elevation_[static_cast<std::size_t>(*t)] : 0.0;
}

bool Grid::same_layout(const Grid& other) const noexcept
{
  return origin_ == other.origin_ && tile_size_ == other.tile_size_ &&
         n_cols_ == other.n_cols_ && n_rows_ == other.n_rows_;
}

double distance_3d(Point2 tile, double tile_elevation, Point2 cell, double cell_height,
                   double cell_ground)
{
  const double dx = tile.x - cell.x;
  const double dy = tile.y - cell.y;
  const double dz = (cell_ground + cell_height) - tile_elevation;
  const double r = std::sqrt(dx * dx + dy * dy + dz * dz);
  return r < 1.0 ? 1.0 : r;
}

double bearing(Point2 from, Point2 to) noexcept
{
  // atan2(east, north) gives the clockwise angle from north
  double b = std::atan2(to.x - from.x, to.y - from.y) * rad2deg;
  if (b < 0.0)
    b += 360.0;
  return b >= 360.0 ? b - 360.0 : b;
}

double wrap_degrees(double angle) noexcept
{
  double a = std::fmod(angle, 360.0);
  if (a > 180.0)
    a -= 360.0;
  else if (a <= -180.0)
    a += 360.0;
  return a;
}

double azimuth_offset(double bearing_deg, double azimuth_deg) noexcept
{
  return wrap_degrees(bearing_deg - azimuth_deg);
}

double elevation_offset(double horizontal_dist, double height_diff, double tilt_deg) noexcept
{
  const double depression = std::atan2(height_diff, horizontal_dist) * rad2deg;
  return wrap_degrees(depression - tilt_deg);
}

bool annulus_contains(const Annulus& ann, Point2 p) noexcept
{
  const double d = std::hypot(p.x - ann.center.x, p.y - ann.center.y);
  return ann.inner_radius <= d && d < ann.outer_radius;
}

} // namespace cellloc
