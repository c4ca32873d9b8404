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


#include "cellloc/config.hpp"

#include "cellloc/io.hpp"

#include <json.hpp>

namespace cellloc
{

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace
{

fs::path resolve(const fs::path& base, const std::string& p)
{
  const fs::path path(p);
  return path.is_absolute() ? path : base / path;
}

template <class T>
void read_opt(const json& j, const char* key, T& dst)
{
  if (j.contains(key) && !j.at(key).is_null())
    dst = j.at(key).get<T>();
}

void require_file(const fs::path& p, const char* what)
{
  if (!fs::exists(p))
    throw ConfigError(std::string(what) + " file '" + p.string() + "' does not exist");
}

bool is_ascii_grid(const fs::path& p)
{
  const auto ext = p.extension().string();
  return ext == ".asc" || ext == ".grd";
}

} // namespace

RunConfig RunConfig::load(const fs::path& path)
{
  if (!fs::exists(path))
    throw ConfigError("config file '" + path.string() + "' does not exist");
  std::string text;
  try
  {
    text = io::read_file(path);
  }
  catch (const Error& e)
  {
    throw ConfigError(e.what());
  }
  return parse(text, path.has_parent_path() ? path.parent_path() : fs::path("."));
}

RunConfig RunConfig::parse(const std::string& json_text, const fs::path& base)
{
  RunConfig cfg;
  try
  {
    const json j = json::parse(json_text);

    const auto& g = j.at("grid");
    if (g.contains("origin"))
    {
      const auto o = g.at("origin").get<std::vector<double>>();
      if (o.size() != 2)
        throw ConfigError("grid.origin must be [x, y]");
      cfg.grid.origin = {o[0], o[1]};
    }
    read_opt(g, "tile_size", cfg.grid.tile_size);
    cfg.grid.n_cols = g.at("n_cols").get<std::int64_t>();
    cfg.grid.n_rows = g.at("n_rows").get<std::int64_t>();

    cfg.cellplan = resolve(base, j.at("cellplan").get<std::string>());
    require_file(cfg.cellplan, "cell plan");

    if (j.contains("elevation") && !j.at("elevation").is_null())
    {
      cfg.elevation = resolve(base, j.at("elevation").get<std::string>());
      require_file(*cfg.elevation, "elevation");
    }

    if (j.contains("landuse") && !j.at("landuse").is_null())
    {
      const auto& l = j.at("landuse");
      LandUseSource src;
      src.weights = resolve(base, l.at("weights").get<std::string>());
      require_file(src.weights, "land use weights");
      if (l.contains("fractions"))
      {
        src.fractions = resolve(base, l.at("fractions").get<std::string>());
        require_file(*src.fractions, "land use fractions");
      }
      if (l.contains("rasters"))
        for (const auto& [name, p] : l.at("rasters").items())
        {
          src.rasters[name] = resolve(base, p.get<std::string>());
          require_file(src.rasters[name], "land use raster");
        }
      if (!src.fractions && src.rasters.empty())
        throw ConfigError("landuse needs 'fractions' or 'rasters'");
      cfg.landuse = std::move(src);
    }

    if (j.contains("cell_defaults"))
    {
      const auto& d = j.at("cell_defaults");
      auto& cd = cfg.cell_defaults;
      read_opt(d, "height_macro", cd.height_macro);
      read_opt(d, "height_small", cd.height_small);
      read_opt(d, "tilt", cd.tilt);
      read_opt(d, "beam_h", cd.beam_h);
      read_opt(d, "beam_v", cd.beam_v);
      read_opt(d, "power_macro", cd.power_macro);
      read_opt(d, "power_small", cd.power_small);
      read_opt(d, "path_loss_exp", cd.path_loss_exponent);
    }
    if (j.contains("dominance"))
    {
      const auto& d = j.at("dominance");
      read_opt(d, "S_mid", cfg.dominance.s_mid);
      read_opt(d, "S_steep", cfg.dominance.s_steep);
      read_opt(d, "min_dominance", cfg.dominance.min_dominance);
    }
    cfg.dominance.check();
    if (j.contains("patterns"))
    {
      read_opt(j.at("patterns"), "azimuth_max_loss", cfg.patterns.azimuth_max_loss);
      read_opt(j.at("patterns"), "elevation_max_loss", cfg.patterns.elevation_max_loss);
    }

    if (j.contains("prior"))
    {
      const auto& p = j.at("prior");
      cfg.prior = parse_prior_kind(p.at("kind").get<std::string>());
      if (p.contains("pi"))
      {
        const auto pi = p.at("pi").get<std::vector<double>>();
        if (pi.size() != 3)
          throw ConfigError("prior.pi must have three components");
        cfg.pi = {pi[0], pi[1], pi[2]};
      }
      if (cfg.prior == PriorKind::composite)
        cfg.pi.check();
    }
    if ((cfg.prior == PriorKind::landuse ||
         (cfg.prior == PriorKind::composite && cfg.pi.landuse > 0.0)) &&
        !cfg.landuse)
      throw ConfigError("the land use prior needs a 'landuse' section");

    if (j.contains("likelihood"))
      cfg.likelihood = parse_likelihood_kind(j.at("likelihood").get<std::string>());
    if (j.contains("voronoi"))
      read_opt(j.at("voronoi"), "shift", cfg.voronoi_shift);

    if (j.contains("ta") && !j.at("ta").is_null())
    {
      const auto& t = j.at("ta");
      TaSettings ta;
      ta.tau = t.at("tau").get<int>();
      read_opt(t, "b", ta.merge);
      read_opt(t, "band_width", ta.band_width);
      if (t.contains("cell"))
        ta.cell = t.at("cell").get<std::string>();
      TimingAdvanceSpec{ta.tau, ta.band_width, ta.merge}.check();
      cfg.ta = ta;
    }

    if (j.contains("output_dir"))
      cfg.output_dir = resolve(base, j.at("output_dir").get<std::string>());
    else
      cfg.output_dir = base / "out";
  }
  catch (const ConfigError&)
  {
    throw;
  }
  catch (const json::exception& e)
  {
    throw ConfigError(std::string("invalid config: ") + e.what());
  }
  catch (const Error& e)
  {
    throw ConfigError(std::string("invalid config: ") + e.what());
  }
  return cfg;
}

Dataset load_dataset(const RunConfig& cfg)
{
  const Grid layout(cfg.grid.origin, cfg.grid.tile_size, cfg.grid.n_cols, cfg.grid.n_rows);
  std::vector<double> elevation;
  if (cfg.elevation)
  {
    const auto text = io::read_file(*cfg.elevation);
    elevation = is_ascii_grid(*cfg.elevation) ? io::parse_ascii_grid(text, layout)
                                              : io::parse_elevation_csv(text, layout);
  }
  Dataset ds{Grid(cfg.grid.origin, cfg.grid.tile_size, cfg.grid.n_cols, cfg.grid.n_rows,
                  std::move(elevation)),
             io::parse_cellplan(io::read_file(cfg.cellplan)),
             std::nullopt};

  if (cfg.landuse)
  {
    const auto weights = io::read_file(cfg.landuse->weights);
    if (cfg.landuse->fractions)
    {
      ds.landuse = io::parse_landuse(weights, io::read_file(*cfg.landuse->fractions), ds.grid);
    }
    else
    {
      std::map<std::string, std::string> rasters;
      for (const auto& [name, p] : cfg.landuse->rasters)
        rasters[name] = io::read_file(p);
      ds.landuse = io::parse_landuse_rasters(weights, rasters, ds.grid);
    }
  }
  return ds;
}

} // namespace cellloc
