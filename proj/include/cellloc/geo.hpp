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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace cellloc
{

using TileId = std::int64_t;

struct Point2
{
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

// Square-tile partition of a planar (projected, metric) region.
//
// Tile index t = row * n_cols + col; row 0 is the southernmost row and col 0
// the westernmost column. `origin` is the south-west corner of tile 0.
class Grid
{
public:
  Grid(Point2 origin, double tile_size, std::int64_t n_cols, std::int64_t n_rows);
  Grid(Point2 origin, double tile_size, std::int64_t n_cols, std::int64_t n_rows,
       std::vector<double> elevation);

  const Point2& origin() const noexcept { return origin_; }
  double tile_size() const noexcept { return tile_size_; }
  std::int64_t n_cols() const noexcept { return n_cols_; }
  std::int64_t n_rows() const noexcept { return n_rows_; }
  std::int64_t size() const noexcept { return n_cols_ * n_rows_; }

  bool contains(TileId t) const noexcept { return t >= 0 && t < size(); }

  std::int64_t row(TileId t) const;
  std::int64_t col(TileId t) const;
  TileId tile_at(std::int64_t row, std::int64_t col) const;

  // Tile containing a planar point; nullopt outside the grid. Points on the
  // shared edge of two tiles belong to the east/north one.
  std::optional<TileId> locate(Point2 p) const noexcept;

  Point2 centroid(TileId t) const;

  // Terrain height of tile t in meters.
  double elevation(TileId t) const;
  // Terrain height under a point, 0 outside the grid.
  double elevation_at(Point2 p) const noexcept;
  const std::vector<double>& elevations() const noexcept { return elevation_; }

  bool same_layout(const Grid& other) const noexcept;

private:
  Point2 origin_;
  double tile_size_;
  std::int64_t n_cols_;
  std::int64_t n_rows_;
  std::vector<double> elevation_;
};

// Ring [inner_radius, outer_radius) around a center.
struct Annulus
{
  Point2 center;
  double inner_radius = 0.0;
  double outer_radius = 0.0;
};

// Euclidean distance between a tile centroid at terrain height
// `tile_elevation` and an antenna mounted `cell_height` above terrain at
// `cell_ground`. Never below 1 m, the reference distance of the path-loss law.
double distance_3d(Point2 tile, double tile_elevation, Point2 cell, double cell_height,
                   double cell_ground);

// Compass bearing from `from` to `to`: degrees clockwise from north, [0, 360).
double bearing(Point2 from, Point2 to) noexcept;

// Wraps an angle in degrees into (-180, 180].
double wrap_degrees(double angle) noexcept;

// Signed horizontal angle from the antenna azimuth to the bearing of a tile.
double azimuth_offset(double bearing_deg, double azimuth_deg) noexcept;

// Angle between the tilted boresight and the line of sight to a tile, looking
// down from the antenna; positive below the boresight.
double elevation_offset(double horizontal_dist, double height_diff, double tilt_deg) noexcept;

bool annulus_contains(const Annulus& ann, Point2 p) noexcept;

} // namespace cellloc
