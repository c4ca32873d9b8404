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
#include "cellloc/geo.hpp"
#include "cellloc/priors.hpp"
#include "cellloc/propagation.hpp"
#include "cellloc/voronoi.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cellloc::io
{

// Minimal RFC 4180 reader: comma separated, optional double quotes, first
// row is the header. Blank lines are skipped.
struct CsvTable
{
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line_numbers; // 1-based source line of each row

  // Column index by name, nullopt when absent.
  std::optional<std::size_t> column(std::string_view name) const noexcept;
};

CsvTable read_csv(std::string_view text);

std::string read_file(const std::filesystem::path& path);

// Writes to a sibling temporary file and renames it over `path`, so readers
// never observe a partial file.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

// Shortest "%.12g" rendering used in every output table.
std::string format_prob(double v);

// Columns id,x,y,height,directional,azimuth,tilt,beam_h,beam_v,power,
// path_loss_exp,small; only id, x and y are mandatory. Empty fields stay
// absent for apply_defaults.
CellPlan parse_cellplan(std::string_view csv);
std::string write_cellplan(const CellPlan& plan);

// `class,weight` rows.
std::vector<std::pair<std::string, double>> parse_landuse_weights(std::string_view csv);

// Fractions table `tile_id,<class>,<class>,...`, one row per tile of the
// grid. Rows summing within 1e-3 of 1 are renormalized.
LandUseTable parse_landuse(std::string_view weights_csv, std::string_view fractions_csv,
                           const Grid& grid);

// One ASCII-grid raster of fractions per class, aligned to the grid.
LandUseTable parse_landuse_rasters(std::string_view weights_csv,
                                   const std::map<std::string, std::string>& rasters,
                                   const Grid& grid);

// `tile_id,elevation`; tiles not listed get 0.
std::vector<double> parse_elevation_csv(std::string_view csv, const Grid& grid);

// ESRI ASCII grid (ncols, nrows, xllcorner, yllcorner, cellsize header; first
// data row is the northernmost). Throws MismatchError when not aligned with
// the grid. Returns per-tile values in tile-id order.
std::vector<double> parse_ascii_grid(std::string_view text, const Grid& grid);
std::string write_ascii_grid(const std::vector<double>& values, const Grid& grid);

// Posterior output table.
struct OutputRow
{
  std::string cell_id;
  TileId tile_id = 0;
  std::optional<int> ta;
  double prob = 0.0;

  friend bool operator==(const OutputRow&, const OutputRow&) = default;
};

inline constexpr std::string_view output_header = "cell_id,tile_id,ta,prob";

// Rows sorted by (cell_id, ta, tile_id); only positive probabilities.
std::vector<OutputRow> output_rows(const Posterior& post);
std::vector<OutputRow> output_rows(const std::vector<TaPosterior>& results);
std::string write_output(std::vector<OutputRow> rows);
std::string write_output(const Posterior& post);
std::string write_output(const std::vector<TaPosterior>& results);
std::vector<OutputRow> parse_output(std::string_view csv);

// tile_id,prob for every tile.
std::string write_prior(const TileDistribution& prior);
// tile_id followed by one column per named prior.
std::string write_priors(const std::vector<std::pair<std::string, const TileDistribution*>>& priors);
// cell_id,tile_id,strength_dbm,dominance
std::string write_fields(const Fields& fields);
// cell_id,tile_id,prob
std::string write_likelihood(const LikelihoodField& likelihood);
// tile_id,cell_id; unassigned tiles are omitted.
std::string write_tessellation(const Tessellation& tess);

// FeatureCollection with one (Multi)Polygon per cell, tiles dissolved into
// their outline. Properties: cell_id, n_tiles.
std::string tessellation_geojson(const Tessellation& tess, const Grid& grid);
// FeatureCollection of tile squares with properties tile_id and `property`.
std::string tiles_geojson(const std::vector<FieldEntry>& values, const Grid& grid,
                          const std::string& property);

} // namespace cellloc::io
