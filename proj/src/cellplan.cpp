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


#include "cellloc/cellplan.hpp"

#include "cellloc/error.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace cellloc
{

const Cell* CellPlan::find(const std::string& id) const noexcept
{
  const auto it = std::find_if(cells.begin(), cells.end(), [&](const Cell& c) { return c.id == id; });
  return it == cells.end() ? nullptr : &*it;
}

std::size_t CellPlan::index_of(const std::string& id) const
{
  const auto* c = find(id);
  if (c == nullptr)
    throw RangeError("unknown cell '" + id + "'");
  return static_cast<std::size_t>(c - cells.data());
}

std::size_t ValidationReport::error_count() const noexcept
{
  return static_cast<std::size_t>(std::count_if(
      findings.begin(), findings.end(), [](const Finding& f) { return f.severity == Severity::error; }));
}

std::size_t ValidationReport::warning_count() const noexcept
{
  return findings.size() - error_count();
}

bool ValidationReport::has(const std::string& cell, const std::string& rule) const noexcept
{
  return std::any_of(findings.begin(), findings.end(),
                     [&](const Finding& f) { return f.cell == cell && f.rule == rule; });
}

ValidationReport validate(const CellPlan& plan, const Grid& grid)
{
  ValidationReport report;
  auto error = [&](const std::string& cell, std::string rule, std::string message) {
    report.findings.push_back({Severity::error, cell, std::move(rule), std::move(message)});
  };

  if (plan.cells.empty())
    error({}, "non-empty", "cell plan contains no cells");

  std::unordered_map<std::string, int> seen;
  for (const auto& c : plan.cells)
  {
    if (c.id.empty())
      error({}, "id-required", "cell without id");
    else if (++seen[c.id] == 2)
      error(c.id, "unique-id", "duplicate cell id");

    if (!std::isfinite(c.x) || !std::isfinite(c.y))
    {
      error(c.id, "finite-position", "non-finite coordinates");
    }
    else if (!grid.locate(c.position()))
    {
      report.findings.push_back(
          {Severity::warning, c.id, "outside-grid", "cell lies outside the grid bounds"});
    }

    const bool directional = c.directional.value_or(c.azimuth.has_value());
    auto require = [&](bool present, const char* field) {
      if (!present)
        error(c.id, "missing-field", std::string("field '") + field + "' is absent");
    };
    require(c.height.has_value(), "height");
    require(c.directional.has_value(), "directional");
    require(c.power.has_value(), "power");
    require(c.path_loss_exponent.has_value(), "path_loss_exp");
    require(c.small.has_value(), "small");
    if (directional)
    {
      require(c.tilt.has_value(), "tilt");
      require(c.beam_h.has_value(), "beam_h");
      require(c.beam_v.has_value(), "beam_v");
      if (!c.azimuth)
        error(c.id, "azimuth-required", "directional cell without azimuth");
    }

    if (c.azimuth && !(*c.azimuth >= 0.0 && *c.azimuth < 360.0))
      error(c.id, "azimuth-range", "azimuth must lie in [0, 360)");
    if (c.power && !(*c.power > 0.0))
      error(c.id, "power-positive", "power must be positive");
    if (c.path_loss_exponent && !(*c.path_loss_exponent > 0.0))
      error(c.id, "path-loss-positive", "path loss exponent must be positive");
    if (c.height && !(*c.height >= 0.0))
      error(c.id, "height-nonnegative", "height must be non-negative");
    if (c.tilt && !std::isfinite(*c.tilt))
      error(c.id, "tilt-finite", "tilt must be finite");
    for (const auto& beam : {c.beam_h, c.beam_v})
      if (beam && !(*beam > 0.0 && *beam < 180.0))
        error(c.id, "beam-range", "beam widths must lie in (0, 180)");
  }
  return report;
}

CellPlan apply_defaults(const CellPlan& plan, const CellDefaults& defaults)
{
  CellPlan out = plan;
  for (auto& c : out.cells)
  {
    if (!c.small)
      c.small = false;
    if (!c.directional)
      c.directional = c.azimuth.has_value();
    const bool small = *c.small;
    if (!c.height)
      c.height = small ? defaults.height_small : defaults.height_macro;
    if (!c.power)
      c.power = small ? defaults.power_small : defaults.power_macro;
    if (!c.path_loss_exponent)
      c.path_loss_exponent = defaults.path_loss_exponent;
    if (!c.tilt)
      c.tilt = defaults.tilt;
    if (!c.beam_h)
      c.beam_h = defaults.beam_h;
    if (!c.beam_v)
      c.beam_v = defaults.beam_v;
  }
  return out;
}

} // namespace cellloc
