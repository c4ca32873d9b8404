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


#include "cellloc/io.hpp"

#include "cellloc/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <unistd.h>

namespace cellloc::io
{

namespace fs = std::filesystem;

std::optional<std::size_t> CsvTable::column(std::string_view name) const noexcept
{
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end())
    return std::nullopt;
  return static_cast<std::size_t>(it - header.begin());
}

namespace
{

std::string trim(std::string_view s)
{
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos)
    return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_record(std::string_view line, std::size_t line_no)
{
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i)
  {
    const char ch = line[i];
    if (quoted)
    {
      if (ch == '"')
      {
        if (i + 1 < line.size() && line[i + 1] == '"')
        {
          cur += '"';
          ++i;
        }
        else
          quoted = false;
      }
      else
        cur += ch;
    }
    else if (ch == '"')
    {
      quoted = true;
      was_quoted = true;
    }
    else if (ch == ',')
    {
      fields.push_back(was_quoted ? cur : trim(cur));
      cur.clear();
      was_quoted = false;
    }
    else
      cur += ch;
  }
  if (quoted)
    throw ParseError("unterminated quoted field", line_no);
  fields.push_back(was_quoted ? cur : trim(cur));
  return fields;
}

double parse_double(const std::string& s, std::size_t row, const std::string& column)
{
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (first != last && *first == '+')
    ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || s.empty() || !std::isfinite(v))
    throw ParseError("'" + s + "' is not a finite number", row, column);
  return v;
}

std::int64_t parse_int(const std::string& s, std::size_t row, const std::string& column)
{
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw ParseError("'" + s + "' is not an integer", row, column);
  return v;
}

bool parse_bool(const std::string& s, std::size_t row, const std::string& column)
{
  std::string l = s;
  std::transform(l.begin(), l.end(), l.begin(), [](unsigned char c) { return std::tolower(c); });
  if (l == "true" || l == "1" || l == "yes" || l == "t")
    return true;
  if (l == "false" || l == "0" || l == "no" || l == "f")
    return false;
  throw ParseError("'" + s + "' is not a boolean", row, column);
}

const std::string& field(const CsvTable& t, std::size_t r, std::size_t c)
{
  static const std::string empty;
  return c < t.rows[r].size() ? t.rows[r][c] : empty;
}

std::string format_g12(double v)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

} // namespace

CsvTable read_csv(std::string_view text)
{
  CsvTable table;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  bool have_header = false;
  while (pos <= text.size())
  {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos)
      end = text.size();
    auto line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r')
      line.remove_suffix(1);
    if (trim(line).empty())
    {
      if (end == text.size())
        break;
      continue;
    }
    auto rec = split_record(line, line_no);
    if (!have_header)
    {
      table.header = std::move(rec);
      have_header = true;
    }
    else
    {
      if (rec.size() > table.header.size())
        throw ParseError("more fields than header columns", line_no);
      table.rows.push_back(std::move(rec));
      table.line_numbers.push_back(line_no);
    }
    if (end == text.size())
      break;
  }
  if (!have_header)
    throw ParseError("missing header row");
  return table;
}

std::string read_file(const fs::path& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const fs::path& path, std::string_view content)
{
  std::error_code ec;
  if (path.has_parent_path())
    fs::create_directories(path.parent_path(), ec);
  if (ec)
    throw Error("cannot create directory for '" + path.string() + "': " + ec.message());
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out)
      throw Error("cannot write '" + tmp.string() + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out)
    {
      out.close();
      fs::remove(tmp);
      throw Error("write failed for '" + path.string() + "'");
    }
  }
  fs::rename(tmp, path, ec);
  if (ec)
  {
    fs::remove(tmp);
    throw Error("cannot replace '" + path.string() + "': " + ec.message());
  }
}

std::string format_prob(double v)
{
  return format_g12(v);
}

CellPlan parse_cellplan(std::string_view csv)
{
  const auto table = read_csv(csv);
  for (const char* required : {"id", "x", "y"})
    if (!table.column(required))
      throw ParseError(std::string("missing mandatory column '") + required + "'", 1, required);

  const auto c_id = *table.column("id");
  const auto c_x = *table.column("x");
  const auto c_y = *table.column("y");

  CellPlan plan;
  for (std::size_t r = 0; r < table.rows.size(); ++r)
  {
    const auto row = table.line_numbers[r];
    Cell cell;
    cell.id = field(table, r, c_id);
    if (cell.id.empty())
      throw ParseError("mandatory field is empty", row, "id");
    for (auto [col, name, dst] : {std::tuple{c_x, "x", &cell.x}, std::tuple{c_y, "y", &cell.y}})
    {
      const auto& v = field(table, r, col);
      if (v.empty())
        throw ParseError("mandatory field is empty", row, name);
      *dst = parse_double(v, row, name);
    }

    auto opt_double = [&](const char* name, std::optional<double>& dst) {
      if (const auto c = table.column(name); c && !field(table, r, *c).empty())
        dst = parse_double(field(table, r, *c), row, name);
    };
    auto opt_bool = [&](const char* name, std::optional<bool>& dst) {
      if (const auto c = table.column(name); c && !field(table, r, *c).empty())
        dst = parse_bool(field(table, r, *c), row, name);
    };
    opt_double("height", cell.height);
    opt_bool("directional", cell.directional);
    opt_double("azimuth", cell.azimuth);
    opt_double("tilt", cell.tilt);
    opt_double("beam_h", cell.beam_h);
    opt_double("beam_v", cell.beam_v);
    opt_double("power", cell.power);
    opt_double("path_loss_exp", cell.path_loss_exponent);
    opt_bool("small", cell.small);
    plan.cells.push_back(std::move(cell));
  }
  return plan;
}

std::string write_cellplan(const CellPlan& plan)
{
  std::string out = "id,x,y,height,directional,azimuth,tilt,beam_h,beam_v,power,path_loss_exp,small\n";
  auto d = [](const std::optional<double>& v) { return v ? format_g12(*v) : std::string(); };
  auto b = [](const std::optional<bool>& v) { return v ? std::string(*v ? "true" : "false") : std::string(); };
  for (const auto& c : plan.cells)
  {
    out += c.id + ',' + format_g12(c.x) + ',' + format_g12(c.y) + ',' + d(c.height) + ',' +
           b(c.directional) + ',' + d(c.azimuth) + ',' + d(c.tilt) + ',' + d(c.beam_h) + ',' +
           d(c.beam_v) + ',' + d(c.power) + ',' + d(c.path_loss_exponent) + ',' + b(c.small) + '\n';
  }
  return out;
}

std::vector<std::pair<std::string, double>> parse_landuse_weights(std::string_view csv)
{
  const auto table = read_csv(csv);
  const auto c_class = table.column("class");
  const auto c_weight = table.column("weight");
  if (!c_class || !c_weight)
    throw ParseError("land use weights need columns 'class' and 'weight'", 1);
  std::vector<std::pair<std::string, double>> out;
  std::set<std::string> seen;
  for (std::size_t r = 0; r < table.rows.size(); ++r)
  {
    const auto row = table.line_numbers[r];
    const auto& name = field(table, r, *c_class);
    if (name.empty())
      throw ParseError("empty class name", row, "class");
    if (!seen.insert(name).second)
      throw ParseError("duplicate class '" + name + "'", row, "class");
    const double u = parse_double(field(table, r, *c_weight), row, "weight");
    if (u < 0.0)
      throw ParseError("negative weight", row, "weight");
    out.emplace_back(name, u);
  }
  if (out.empty())
    throw ParseError("no land use classes");
  return out;
}

namespace
{

constexpr double fraction_tolerance = 1e-3;

LandUseTable make_landuse(const std::vector<std::pair<std::string, double>>& weights,
                          std::vector<double> fractions)
{
  std::vector<std::string> names;
  std::vector<double> u;
  for (const auto& [n, w] : weights)
  {
    names.push_back(n);
    u.push_back(w);
  }
  return LandUseTable(std::move(names), std::move(u), std::move(fractions), fraction_tolerance);
}

void check_row_sum(const double* row, std::size_t k, std::size_t line, const std::string& what)
{
  double total = 0.0;
  for (std::size_t j = 0; j < k; ++j)
    total += row[j];
  if (std::abs(total - 1.0) > fraction_tolerance)
    throw ParseError("land use fractions of " + what + " sum to " + format_g12(total), line);
}

} // namespace

LandUseTable parse_landuse(std::string_view weights_csv, std::string_view fractions_csv,
                           const Grid& grid)
{
  const auto weights = parse_landuse_weights(weights_csv);
  const auto table = read_csv(fractions_csv);
  const auto c_tile = table.column("tile_id");
  if (!c_tile)
    throw ParseError("land use fractions need a 'tile_id' column", 1, "tile_id");

  const std::size_t k = weights.size();
  // header column -> class index
  std::vector<std::pair<std::size_t, std::size_t>> mapping;
  for (std::size_t c = 0; c < table.header.size(); ++c)
  {
    if (c == *c_tile)
      continue;
    const auto it = std::find_if(weights.begin(), weights.end(),
                                 [&](const auto& w) { return w.first == table.header[c]; });
    if (it == weights.end())
      throw ParseError("unknown land use class '" + table.header[c] + "'", 1, table.header[c]);
    mapping.emplace_back(c, static_cast<std::size_t>(it - weights.begin()));
  }

  const auto n = static_cast<std::size_t>(grid.size());
  std::vector<double> fractions(n * k, 0.0);
  std::vector<bool> seen(n, false);
  for (std::size_t r = 0; r < table.rows.size(); ++r)
  {
    const auto row = table.line_numbers[r];
    const auto t = parse_int(field(table, r, *c_tile), row, "tile_id");
    if (!grid.contains(t))
      throw ParseError("tile " + std::to_string(t) + " outside grid", row, "tile_id");
    if (seen[static_cast<std::size_t>(t)])
      throw ParseError("duplicate tile " + std::to_string(t), row, "tile_id");
    seen[static_cast<std::size_t>(t)] = true;
    double* dst = fractions.data() + static_cast<std::size_t>(t) * k;
    for (const auto& [c, j] : mapping)
    {
      const auto& v = field(table, r, c);
      const double w = v.empty() ? 0.0 : parse_double(v, row, table.header[c]);
      if (w < 0.0 || w > 1.0)
        throw ParseError("fraction outside [0, 1]", row, table.header[c]);
      dst[j] = w;
    }
    check_row_sum(dst, k, row, "tile " + std::to_string(t));
  }
  for (std::size_t t = 0; t < n; ++t)
    if (!seen[t])
      throw ParseError("land use fractions missing for tile " + std::to_string(t));
  return make_landuse(weights, std::move(fractions));
}

LandUseTable parse_landuse_rasters(std::string_view weights_csv,
                                   const std::map<std::string, std::string>& rasters,
                                   const Grid& grid)
{
  const auto weights = parse_landuse_weights(weights_csv);
  const std::size_t k = weights.size();
  const auto n = static_cast<std::size_t>(grid.size());
  std::vector<double> fractions(n * k, 0.0);
  for (const auto& [name, text] : rasters)
  {
    const auto it =
        std::find_if(weights.begin(), weights.end(), [&](const auto& w) { return w.first == name; });
    if (it == weights.end())
      throw ParseError("unknown land use class '" + name + "'");
    const auto j = static_cast<std::size_t>(it - weights.begin());
    const auto values = parse_ascii_grid(text, grid);
    for (std::size_t t = 0; t < n; ++t)
    {
      if (values[t] < 0.0 || values[t] > 1.0)
        throw ParseError("fraction outside [0, 1] for class '" + name + "' at tile " +
                         std::to_string(t));
      fractions[t * k + j] = values[t];
    }
  }
  for (std::size_t t = 0; t < n; ++t)
    check_row_sum(fractions.data() + t * k, k, 0, "tile " + std::to_string(t));
  return make_landuse(weights, std::move(fractions));
}

std::vector<double> parse_elevation_csv(std::string_view csv, const Grid& grid)
{
  const auto table = read_csv(csv);
  const auto c_tile = table.column("tile_id");
  const auto c_elev = table.column("elevation");
  if (!c_tile || !c_elev)
    throw ParseError("elevation table needs columns 'tile_id' and 'elevation'", 1);
  std::vector<double> out(static_cast<std::size_t>(grid.size()), 0.0);
  for (std::size_t r = 0; r < table.rows.size(); ++r)
  {
    const auto row = table.line_numbers[r];
    const auto t = parse_int(field(table, r, *c_tile), row, "tile_id");
    if (!grid.contains(t))
      throw ParseError("tile " + std::to_string(t) + " outside grid", row, "tile_id");
    out[static_cast<std::size_t>(t)] = parse_double(field(table, r, *c_elev), row, "elevation");
  }
  return out;
}

std::vector<double> parse_ascii_grid(std::string_view text, const Grid& grid)
{
  std::istringstream in{std::string(text)};
  std::map<std::string, double> header;
  std::string line;
  std::size_t line_no = 0;
  std::ostringstream body;
  bool in_body = false;
  // Header lines start with an alphabetic key; the first other line starts the data.
  while (std::getline(in, line))
  {
    ++line_no;
    std::istringstream ls(line);
    std::string key;
    if (!in_body && (ls >> key) && std::isalpha(static_cast<unsigned char>(key[0])))
    {
      std::transform(key.begin(), key.end(), key.begin(),
                     [](unsigned char c) { return std::tolower(c); });
      std::string value;
      if (!(ls >> value))
        throw ParseError("ASCII grid: header key '" + key + "' without value", line_no);
      header[key] = parse_double(value, line_no, key);
      continue;
    }
    in_body = true;
    body << line << '\n';
  }
  for (const char* k : {"ncols", "nrows", "cellsize"})
    if (!header.count(k))
      throw ParseError(std::string("ASCII grid: missing header '") + k + "'");
  const bool center = header.count("xllcenter") != 0;
  if (!center && (!header.count("xllcorner") || !header.count("yllcorner")))
    throw ParseError("ASCII grid: missing xllcorner/yllcorner");

  const double cell = header["cellsize"];
  const double xll = center ? header["xllcenter"] - cell / 2 : header["xllcorner"];
  const double yll = center ? header["yllcenter"] - cell / 2 : header["yllcorner"];
  const auto ncols = static_cast<std::int64_t>(header["ncols"]);
  const auto nrows = static_cast<std::int64_t>(header["nrows"]);
  const double eps = 1e-6 * grid.tile_size();
  if (ncols != grid.n_cols() || nrows != grid.n_rows() || std::abs(cell - grid.tile_size()) > eps ||
      std::abs(xll - grid.origin().x) > eps || std::abs(yll - grid.origin().y) > eps)
    throw MismatchError("ASCII grid is not aligned with the grid");
  const bool has_nodata = header.count("nodata_value") != 0;
  const double nodata = has_nodata ? header["nodata_value"] : 0.0;

  std::vector<double> out(static_cast<std::size_t>(grid.size()));
  std::istringstream data(body.str());
  std::string tok;
  for (std::int64_t i = 0; i < nrows; ++i)
  {
    const auto r = nrows - 1 - i;
    for (std::int64_t c = 0; c < ncols; ++c)
    {
      if (!(data >> tok))
        throw ParseError("ASCII grid: expected " + std::to_string(ncols * nrows) + " values");
      double v = parse_double(tok, static_cast<std::size_t>(i + 1), "value");
      if (has_nodata && v == nodata)
        v = 0.0;
      out[static_cast<std::size_t>(grid.tile_at(r, c))] = v;
    }
  }
  if (data >> tok)
    throw ParseError("ASCII grid: trailing values");
  return out;
}

std::string write_ascii_grid(const std::vector<double>& values, const Grid& grid)
{
  std::string out = "ncols " + std::to_string(grid.n_cols()) + "\nnrows " +
                    std::to_string(grid.n_rows()) + "\nxllcorner " + format_g12(grid.origin().x) +
                    "\nyllcorner " + format_g12(grid.origin().y) + "\ncellsize " +
                    format_g12(grid.tile_size()) + "\n";
  for (auto r = grid.n_rows() - 1; r >= 0; --r)
  {
    for (std::int64_t c = 0; c < grid.n_cols(); ++c)
    {
      if (c > 0)
        out += ' ';
      out += format_g12(values[static_cast<std::size_t>(grid.tile_at(r, c))]);
    }
    out += '\n';
  }
  return out;
}

namespace
{

void sort_rows(std::vector<OutputRow>& rows)
{
  std::sort(rows.begin(), rows.end(), [](const OutputRow& a, const OutputRow& b) {
    if (a.cell_id != b.cell_id)
      return a.cell_id < b.cell_id;
    if (a.ta != b.ta)
      return a.ta < b.ta;
    return a.tile_id < b.tile_id;
  });
}

} // namespace

std::vector<OutputRow> output_rows(const Posterior& post)
{
  std::vector<OutputRow> rows;
  for (const auto& cp : post.cells)
    for (const auto& e : cp.probs)
      if (e.value > 0.0)
        rows.push_back({cp.cell, e.tile, std::nullopt, e.value});
  sort_rows(rows);
  return rows;
}

std::vector<OutputRow> output_rows(const std::vector<TaPosterior>& results)
{
  std::vector<OutputRow> rows;
  for (const auto& r : results)
    for (const auto& e : r.probs)
      if (e.value > 0.0)
        rows.push_back({r.cell, e.tile, r.tau, e.value});
  sort_rows(rows);
  return rows;
}

std::string write_output(std::vector<OutputRow> rows)
{
  sort_rows(rows);
  std::string out(output_header);
  out += '\n';
  for (const auto& r : rows)
  {
    out += r.cell_id;
    out += ',';
    out += std::to_string(r.tile_id);
    out += ',';
    if (r.ta)
      out += std::to_string(*r.ta);
    out += ',';
    out += format_prob(r.prob);
    out += '\n';
  }
  return out;
}

std::string write_output(const Posterior& post)
{
  return write_output(output_rows(post));
}

std::string write_output(const std::vector<TaPosterior>& results)
{
  return write_output(output_rows(results));
}

std::vector<OutputRow> parse_output(std::string_view csv)
{
  const auto table = read_csv(csv);
  const auto c_cell = table.column("cell_id");
  const auto c_tile = table.column("tile_id");
  const auto c_ta = table.column("ta");
  const auto c_prob = table.column("prob");
  if (!c_cell || !c_tile || !c_ta || !c_prob)
    throw ParseError("output table needs columns cell_id,tile_id,ta,prob", 1);
  std::vector<OutputRow> rows;
  for (std::size_t r = 0; r < table.rows.size(); ++r)
  {
    const auto row = table.line_numbers[r];
    OutputRow o;
    o.cell_id = field(table, r, *c_cell);
    if (o.cell_id.empty())
      throw ParseError("empty cell id", row, "cell_id");
    o.tile_id = parse_int(field(table, r, *c_tile), row, "tile_id");
    if (const auto& ta = field(table, r, *c_ta); !ta.empty())
      o.ta = static_cast<int>(parse_int(ta, row, "ta"));
    o.prob = parse_double(field(table, r, *c_prob), row, "prob");
    if (o.prob < 0.0 || o.prob > 1.0)
      throw ParseError("probability outside [0, 1]", row, "prob");
    rows.push_back(std::move(o));
  }
  return rows;
}

std::string write_prior(const TileDistribution& prior)
{
  std::string out = "tile_id,prob\n";
  for (std::size_t t = 0; t < prior.probs.size(); ++t)
    out += std::to_string(t) + ',' + format_prob(prior.probs[t]) + '\n';
  return out;
}

std::string write_priors(const std::vector<std::pair<std::string, const TileDistribution*>>& priors)
{
  std::string out = "tile_id";
  std::size_t n = 0;
  for (const auto& [name, p] : priors)
  {
    out += ',' + name;
    n = std::max(n, p->probs.size());
  }
  out += '\n';
  for (std::size_t t = 0; t < n; ++t)
  {
    out += std::to_string(t);
    for (const auto& [name, p] : priors)
      out += ',' + format_prob(p->probs[t]);
    out += '\n';
  }
  return out;
}

std::string write_fields(const Fields& fields)
{
  std::string out = "cell_id,tile_id,strength_dbm,dominance\n";
  for (std::size_t a = 0; a < fields.strength.columns.size(); ++a)
  {
    const auto& s = fields.strength.columns[a];
    const auto& d = fields.dominance.columns[a];
    for (std::size_t i = 0; i < s.size(); ++i)
      out += fields.strength.cell_ids[a] + ',' + std::to_string(s[i].tile) + ',' +
             format_g12(s[i].value) + ',' + format_g12(d[i].value) + '\n';
  }
  return out;
}

std::string write_likelihood(const LikelihoodField& likelihood)
{
  const auto& f = likelihood.field;
  std::vector<std::size_t> order(f.cell_ids.size());
  for (std::size_t i = 0; i < order.size(); ++i)
    order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return f.cell_ids[a] < f.cell_ids[b]; });
  std::string out = "cell_id,tile_id,prob\n";
  for (const auto a : order)
    for (const auto& e : f.columns[a])
      out += f.cell_ids[a] + ',' + std::to_string(e.tile) + ',' + format_prob(e.value) + '\n';
  return out;
}

std::string write_tessellation(const Tessellation& tess)
{
  std::string out = "tile_id,cell_id\n";
  for (std::size_t t = 0; t < tess.owner.size(); ++t)
    if (tess.owner[t] != Tessellation::unassigned)
      out += std::to_string(t) + ',' + tess.cell_ids[static_cast<std::size_t>(tess.owner[t])] + '\n';
  return out;
}

} // namespace cellloc::io
