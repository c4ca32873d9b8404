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

#include <cstdint>
#include <string>
#include <vector>

namespace cellloc
{

// Parameters of the logistic map from signal strength (dBm) to dominance.
struct DominanceParams
{
  double s_mid = -92.5;        // dBm at which dominance is 0.5
  double s_steep = 0.2;        // per dBm
  double min_dominance = 1e-5; // sparsification threshold

  // Throws DomainError naming the offending field.
  void check() const;

  friend bool operator==(const DominanceParams&, const DominanceParams&) = default;
};

// Asymptotic losses of the azimuth and elevation radiation patterns (dB).
struct PatternParams
{
  double azimuth_max_loss = 30.0;
  double elevation_max_loss = 30.0;

  friend bool operator==(const PatternParams&, const PatternParams&) = default;
};

// Gaussian-shaped loss curve f(x) = c - c * exp(-x^2 / (2 sigma^2)), in dB.
class RadiationPattern
{
public:
  RadiationPattern(double max_loss, double sigma);

  double max_loss() const noexcept { return max_loss_; }
  double sigma() const noexcept { return sigma_; }

  // Loss at an angular offset in degrees; even in `angle`.
  double loss(double angle) const noexcept;

private:
  double max_loss_;
  double sigma_;
};

// Pattern with 3 dB loss at +/-half_width and asymptote `max_loss`.
// Throws InfeasibleError when max_loss <= 3, DomainError when half_width is
// outside (0, 180).
RadiationPattern fit_pattern(double half_width, double max_loss);

// S0 = 30 + 10 log10(P). Throws DomainError for P <= 0.
double dbm_from_watt(double watt);

// 10 * gamma * log10(r), r >= 1.
double distance_loss(double r, double gamma);

// Geometry of one (tile, cell) link.
struct LinkGeometry
{
  double r = 1.0;       // 3D distance, meters
  double delta = 0.0;   // horizontal offset from azimuth, degrees
  double epsilon = 0.0; // vertical offset from the tilted boresight, degrees
};

// Geometry between tile `t` and a defaulted cell.
LinkGeometry link_geometry(const Cell& cell, const Grid& grid, TileId t);

// Modeled received power in dBm. `cell` must be defaulted.
double signal_strength(const Cell& cell, const LinkGeometry& geo, const PatternParams& patterns = {});

// Logistic dominance in [0, 1].
double dominance(double strength_dbm, const DominanceParams& params) noexcept;

enum class SignalQuality
{
  excellent, // >= -70 dBm
  good,      // [-90, -70)
  fair,      // [-100, -90)
  poor,      // (-110, -100)
  bad        // <= -110 dBm
};

SignalQuality signal_quality(double strength_dbm) noexcept;
const char* to_string(SignalQuality q) noexcept;

struct FieldEntry
{
  TileId tile;
  double value;

  friend bool operator==(const FieldEntry&, const FieldEntry&) = default;
};

// Sparse (cell, tile) -> value map stored cell-major. Column i belongs to
// cell_ids[i] and is sorted by tile id.
struct SparseField
{
  std::int64_t n_tiles = 0;
  std::vector<std::string> cell_ids;
  std::vector<std::vector<FieldEntry>> columns;

  std::size_t n_cells() const noexcept { return cell_ids.size(); }
  std::size_t nnz() const noexcept;
  // Column index of a cell; throws RangeError when absent.
  std::size_t column_of(const std::string& cell) const;
  // Value at (cell column, tile); 0 when absent.
  double at(std::size_t column, TileId t) const noexcept;
  // Every value multiplied by k.
  SparseField scaled(double k) const;

  friend bool operator==(const SparseField&, const SparseField&) = default;
};

// Strength (dBm) and dominance sharing one sparsity pattern.
struct Fields
{
  SparseField strength;
  SparseField dominance;

  friend bool operator==(const Fields&, const Fields&) = default;
};

// Dense strength of every (cell, tile) pair; the input to re-thresholding when
// only the logistic parameters change.
struct StrengthMatrix
{
  std::int64_t n_tiles = 0;
  std::vector<std::string> cell_ids;
  std::vector<std::vector<double>> columns;
};

// Parallel over cells. `threads` = 0 uses the OpenMP default. The result does
// not depend on the thread count. `plan` must be defaulted.
Fields compute_fields(const CellPlan& plan, const Grid& grid, const DominanceParams& params,
                      const PatternParams& patterns = {}, int threads = 0);

// Serial double loop over all pairs, built from the scalar operations above.
Fields compute_fields_reference(const CellPlan& plan, const Grid& grid,
                                const DominanceParams& params, const PatternParams& patterns = {});

StrengthMatrix compute_strength(const CellPlan& plan, const Grid& grid,
                                const PatternParams& patterns = {}, int threads = 0);

// Applies the logistic and threshold to a dense strength matrix. Equal to
// compute_fields on the plan the matrix was computed from.
Fields threshold_fields(const StrengthMatrix& strength, const DominanceParams& params,
                        int threads = 0);

} // namespace cellloc
