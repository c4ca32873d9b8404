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

#include <optional>
#include <string>
#include <vector>

namespace cellloc
{

// One radio antenna. Optional fields stay absent until `apply_defaults` runs;
// the propagation model requires a defaulted plan.
struct Cell
{
  std::string id;
  double x = 0.0;
  double y = 0.0;
  std::optional<double> height;  // meters above ground
  std::optional<bool> directional;
  std::optional<double> azimuth; // degrees clockwise from north
  std::optional<double> tilt;    // degrees below horizon
  std::optional<double> beam_h;  // horizontal 3 dB beam width, degrees
  std::optional<double> beam_v;  // vertical 3 dB beam width, degrees
  std::optional<double> power;   // Watt
  std::optional<double> path_loss_exponent;
  std::optional<bool> small;

  Point2 position() const noexcept { return {x, y}; }
  bool is_small() const noexcept { return small.value_or(false); }
  bool is_directional() const noexcept { return directional.value_or(false); }

  friend bool operator==(const Cell&, const Cell&) = default;
};

struct CellPlan
{
  std::vector<Cell> cells;

  const Cell* find(const std::string& id) const noexcept;
  // Position of `id` in `cells`, throws RangeError when unknown.
  std::size_t index_of(const std::string& id) const;

  friend bool operator==(const CellPlan&, const CellPlan&) = default;
};

// Values filled into absent optional fields. Every field may be overridden
// from the config.
struct CellDefaults
{
  double height_macro = 30.0;
  double height_small = 8.0;
  double tilt = 4.0;
  double beam_h = 65.0;
  double beam_v = 9.0;
  double power_macro = 10.0;
  double power_small = 1.0;
  double path_loss_exponent = 3.75;

  friend bool operator==(const CellDefaults&, const CellDefaults&) = default;
};

enum class Severity
{
  error,
  warning
};

struct Finding
{
  Severity severity;
  std::string cell; // empty for plan-level findings
  std::string rule;
  std::string message;
};

struct ValidationReport
{
  std::vector<Finding> findings;

  bool ok() const noexcept { return error_count() == 0; }
  std::size_t error_count() const noexcept;
  std::size_t warning_count() const noexcept;
  bool has(const std::string& cell, const std::string& rule) const noexcept;
};

// Checks the plan invariants against a grid. Never throws.
//
// Rules: non-empty, unique-id, finite-position, missing-field (an optional
// field that apply_defaults would fill is absent), azimuth-required,
// azimuth-range, power-positive, path-loss-positive, height-nonnegative,
// beam-range. Cells outside the grid produce an outside-grid warning.
ValidationReport validate(const CellPlan& plan, const Grid& grid);

// Fills every absent optional field. Idempotent. A cell without a
// `directional` flag is directional iff it has an azimuth.
CellPlan apply_defaults(const CellPlan& plan, const CellDefaults& defaults = {});

} // namespace cellloc
