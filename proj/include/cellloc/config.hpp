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
#include "cellloc/cellplan.hpp"
#include "cellloc/error.hpp"
#include "cellloc/geo.hpp"
#include "cellloc/priors.hpp"
#include "cellloc/propagation.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <string>

namespace cellloc
{

// Raised for an unreadable or invalid run configuration.
class ConfigError : public Error
{
public:
  using Error::Error;
};

struct GridSpec
{
  Point2 origin;
  double tile_size = 100.0;
  std::int64_t n_cols = 1;
  std::int64_t n_rows = 1;
};

struct LandUseSource
{
  std::filesystem::path weights;
  std::optional<std::filesystem::path> fractions;          // per-tile CSV
  std::map<std::string, std::filesystem::path> rasters;    // class -> ASCII grid
};

struct TaSettings
{
  int tau = 0;
  int merge = 1;
  double band_width = default_ta_band_width;
  std::optional<std::string> cell; // all cells when absent
};

// JSON run configuration. Relative paths resolve against the file's
// directory.
struct RunConfig
{
  GridSpec grid;
  std::filesystem::path cellplan;
  std::optional<std::filesystem::path> elevation; // .csv or ASCII grid
  std::optional<LandUseSource> landuse;
  CellDefaults cell_defaults;
  DominanceParams dominance;
  PatternParams patterns;
  PriorKind prior = PriorKind::uniform;
  MixtureWeights pi{1.0, 0.0, 0.0};
  LikelihoodKind likelihood = LikelihoodKind::strength;
  double voronoi_shift = 100.0;
  std::optional<TaSettings> ta;
  std::filesystem::path output_dir = "out";

  // Throws ConfigError.
  static RunConfig load(const std::filesystem::path& path);
  static RunConfig parse(const std::string& json_text, const std::filesystem::path& base_dir);
};

// Inputs referenced by a configuration, parsed.
struct Dataset
{
  Grid grid;
  CellPlan raw_plan;                  // as read
  std::optional<LandUseTable> landuse;
};

Dataset load_dataset(const RunConfig& config);

} // namespace cellloc
