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

// Shared fixtures and independent oracles for the test suites.

#include "cellloc/bayes.hpp"
#include "cellloc/cellplan.hpp"
#include "cellloc/geo.hpp"
#include "cellloc/propagation.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace cellloc::test
{

inline std::filesystem::path fixtures() { return CELLLOC_FIXTURES; }

inline std::string slurp(const std::filesystem::path& p)
{
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void spit(const std::filesystem::path& p, const std::string& text)
{
  std::ofstream out(p, std::ios::binary);
  out << text;
}

// Unique scratch directory removed on destruction.
class TempDir
{
public:
  TempDir()
  {
    static std::atomic<int> counter{0};
    const auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
    path_ = std::filesystem::temp_directory_path() /
            ("cellloc-test-" + std::to_string(stamp) + "-" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir()
  {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const noexcept { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
  std::filesystem::path path_;
};

inline Cell omni_cell(std::string id, double x, double y, double power = 10.0, double gamma = 4.0,
                      double height = 0.0, bool small = false)
{
  Cell c;
  c.id = std::move(id);
  c.x = x;
  c.y = y;
  c.height = height;
  c.directional = false;
  c.power = power;
  c.path_loss_exponent = gamma;
  c.small = small;
  return apply_defaults(CellPlan{{c}}).cells.front();
}

inline Cell directional_cell(std::string id, double x, double y, double azimuth,
                             double height = 30.0, double tilt = 4.0, double power = 10.0,
                             double gamma = 3.75)
{
  Cell c;
  c.id = std::move(id);
  c.x = x;
  c.y = y;
  c.height = height;
  c.directional = true;
  c.azimuth = azimuth;
  c.tilt = tilt;
  c.power = power;
  c.path_loss_exponent = gamma;
  c.small = false;
  return apply_defaults(CellPlan{{c}}).cells.front();
}

// 3 x 1 grid of 1 km tiles; tiles g1, g2, g3 are ids 0, 1, 2.
inline Grid island_grid() { return Grid({0.0, 0.0}, 1000.0, 3, 1); }

// a1 reaches g1 and g2 at full dominance, a2 reaches g2 and g3.
inline SparseField island_dominance()
{
  SparseField f;
  f.n_tiles = 3;
  f.cell_ids = {"a1", "a2"};
  f.columns = {{{0, 1.0}, {1, 1.0}}, {{1, 1.0}, {2, 1.0}}};
  return f;
}

// Random sparse field with values in (0, 1]; every column has at least one
// entry.
inline SparseField random_field(std::mt19937_64& rng, std::int64_t n_tiles, std::size_t n_cells,
                                double density = 0.6)
{
  std::uniform_real_distribution<double> value(0.01, 1.0);
  std::bernoulli_distribution keep(density);
  std::uniform_int_distribution<std::int64_t> any_tile(0, n_tiles - 1);
  SparseField f;
  f.n_tiles = n_tiles;
  for (std::size_t a = 0; a < n_cells; ++a)
  {
    f.cell_ids.push_back("c" + std::to_string(a));
    std::vector<FieldEntry> col;
    for (TileId t = 0; t < n_tiles; ++t)
      if (keep(rng))
        col.push_back({t, value(rng)});
    if (col.empty())
      col.push_back({any_tile(rng), value(rng)});
    f.columns.push_back(std::move(col));
  }
  return f;
}

// Root of a continuous increasing function on [lo, hi] by bisection.
template <class F>
double bisect(F f, double lo, double hi, int iterations = 200)
{
  for (int i = 0; i < iterations; ++i)
  {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

} // namespace cellloc::test
