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


#include "cellloc/cli.hpp"
#include "cellloc/config.hpp"
#include "cellloc/io.hpp"

#include "support.hpp"

#include <doctest.h>

#include <cstdlib>
#include <map>
#include <set>
#include <sstream>

using namespace cellloc;
namespace fs = std::filesystem;

namespace
{

struct Result
{
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args)
{
  args.insert(args.begin(), "cellloc");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string island() { return (test::fixtures() / "island" / "config.json").string(); }
std::string application() { return (test::fixtures() / "application" / "config.json").string(); }

std::set<std::string> listing(const fs::path& dir)
{
  std::set<std::string> names;
  if (fs::exists(dir))
    for (const auto& e : fs::directory_iterator(dir))
      names.insert(e.path().filename().string());
  return names;
}

// Writes a small scenario next to a config that points at it.
fs::path scenario(const test::TempDir& dir, const std::string& cells, const std::string& extra = "")
{
  test::spit(dir / "cells.csv", cells);
  test::spit(dir / "config.json", R"({"grid": {"origin": [0, 0], "tile_size": 1000, "n_cols": 3, "n_rows": 1},
                                      "cellplan": "cells.csv")" + extra + "}");
  return dir / "config.json";
}

} // namespace

TEST_SUITE("cli")
{
  TEST_CASE("run-all on the island reproduces the expected tables")
  {
    test::TempDir out;
    const auto r = run({"run-all", island(), "--out", out.path().string()});
    REQUIRE_MESSAGE(r.code == 0, r.err);
    CHECK(test::slurp(out / "posterior_composite.csv") == "cell_id,tile_id,ta,prob\n"
                                                          "a1,0,,0.444444444444\n"
                                                          "a1,1,,0.555555555556\n"
                                                          "a2,1,,0.714285714286\n"
                                                          "a2,2,,0.285714285714\n");
    CHECK(test::slurp(out / "posterior_landuse.csv") == "cell_id,tile_id,ta,prob\n"
                                                        "a1,0,,0.4\n"
                                                        "a1,1,,0.6\n"
                                                        "a2,1,,1\n");
    CHECK(test::slurp(out / "priors.csv") == "tile_id,uniform,landuse,network,composite\n"
                                             "0,0.333333333333,0.25,0.25,0.25\n"
                                             "1,0.333333333333,0.75,0.5,0.625\n"
                                             "2,0.333333333333,0,0.25,0.125\n");
    CHECK(test::slurp(out / "posterior.csv") == test::slurp(out / "posterior_composite.csv"));
    // Progress goes to standard error.
    CHECK(r.err.find("run-all") != std::string::npos);
    for (const auto& name : listing(out.path()))
      CHECK(name.find(".tmp") == std::string::npos);
  }

  TEST_CASE("run-all equals the individual stages")
  {
    test::TempDir all, stages;
    REQUIRE(run({"run-all", application(), "--out", all.path().string()}).code == 0);
    for (const char* cmd : {"validate", "strength", "prior", "likelihood", "posterior", "ta"})
      REQUIRE_MESSAGE(run({cmd, application(), "--out", stages.path().string()}).code == 0, cmd);
    const auto produced = listing(stages.path());
    CHECK(produced == std::set<std::string>{"validation.csv", "fields.csv", "prior_composite.csv",
                                            "likelihood_strength.csv", "posterior.csv",
                                            "posterior_ta.csv"});
    for (const auto& name : produced)
      CHECK_MESSAGE(test::slurp(all / name) == test::slurp(stages / name), name);
  }

  TEST_CASE("thread count never changes output")
  {
    test::TempDir one, many;
    REQUIRE(run({"run-all", application(), "--out", one.path().string(), "--threads", "1"}).code == 0);
    REQUIRE(run({"run-all", application(), "--out", many.path().string(), "--threads", "8"}).code == 0);
    for (const auto& name : listing(one.path()))
      CHECK_MESSAGE(test::slurp(one / name) == test::slurp(many / name), name);
  }

  TEST_CASE("voronoi likelihood with uniform prior is uniform over each region")
  {
    test::TempDir out;
    const auto dir = out.path().string();
    REQUIRE(run({"voronoi", application(), "--out", dir}).code == 0);
    REQUIRE(run({"posterior", application(), "--out", dir, "--prior", "uniform", "--likelihood", "voronoi"})
                .code == 0);
    std::map<std::string, int> region;
    const auto tess = io::read_csv(test::slurp(out / "voronoi.csv"));
    for (const auto& row : tess.rows)
      ++region[row[1]];
    const auto rows = io::parse_output(test::slurp(out / "posterior.csv"));
    REQUIRE_FALSE(rows.empty());
    for (const auto& r : rows)
      CHECK(r.prob == doctest::Approx(1.0 / region.at(r.cell_id)).epsilon(1e-11));
    CHECK(test::slurp(out / "voronoi.geojson").find("FeatureCollection") != std::string::npos);
  }

  TEST_CASE("timing advance keeps only tiles inside the annulus")
  {
    test::TempDir out;
    REQUIRE(run({"ta", application(), "--out", out.path().string(), "--tau", "15", "--b", "1"}).code == 0);
    const auto cfg = RunConfig::load(application());
    const auto ds = load_dataset(cfg);
    const auto rows = io::parse_output(test::slurp(out / "posterior_ta.csv"));
    REQUIRE_FALSE(rows.empty());
    std::map<std::string, double> sums;
    for (const auto& r : rows)
    {
      const auto* c = ds.raw_plan.find(r.cell_id);
      REQUIRE(c != nullptr);
      const auto p = ds.grid.centroid(r.tile_id);
      const double d = std::hypot(p.x - c->x, p.y - c->y);
      CHECK(d >= 1093.68 - 1e-9);
      CHECK(d < 1328.04);
      CHECK(r.ta == 15);
      sums[r.cell_id] += r.prob;
    }
    for (const auto& [cell, s] : sums)
      CHECK(s == doctest::Approx(1.0).epsilon(1e-9));

    test::TempDir one;
    REQUIRE(run({"ta", application(), "--out", one.path().string(), "--tau", "15", "--cell", "A1"}).code == 0);
    for (const auto& r : io::parse_output(test::slurp(one / "posterior_ta.csv")))
      CHECK(r.cell_id == "A1");
  }

  TEST_CASE("best server export")
  {
    test::TempDir out;
    REQUIRE(run({"best-server", island(), "--out", out.path().string()}).code == 0);
    CHECK(test::slurp(out / "best_server.csv") == "tile_id,cell_id\n0,a1\n1,a1\n2,a2\n");
  }

  TEST_CASE("config errors exit with 2")
  {
    CHECK(run({"run-all", "/nonexistent/config.json"}).code == cli::exit_config);
    CHECK(run({}).code == cli::exit_config);
    CHECK(run({"teleport", island()}).code == cli::exit_config);
    CHECK(run({"run-all", island(), "--pi", "0.5,0.5,0.5", "--prior", "composite"}).code == cli::exit_config);
    CHECK(run({"ta", island(), "--tau", "1283"}).code == cli::exit_config);
    CHECK(run({"ta", island()}).code == cli::exit_config);
  }

  TEST_CASE("config path from the environment")
  {
    test::TempDir out;
    ::setenv("CELLLOC_CONFIG", island().c_str(), 1);
    const auto r = run({"prior", "--out", out.path().string(), "--prior", "uniform"});
    ::unsetenv("CELLLOC_CONFIG");
    CHECK(r.code == 0);
    CHECK(fs::exists(out / "prior_uniform.csv"));
    CHECK(run({"prior"}).code == cli::exit_config);
  }

  TEST_CASE("validation errors exit with 1 and print the report")
  {
    test::TempDir dir;
    const auto cfg = scenario(dir, "id,x,y\nA1,500,500\nA1,1500,500\n").string();
    const auto r = run({"validate", cfg, "--out", (dir / "out").string()});
    CHECK(r.code == cli::exit_invalid_input);
    CHECK(test::slurp(dir / "out" / "validation.csv").find("A1,unique-id") != std::string::npos);
    // Compute stages refuse the plan too, writing nothing.
    CHECK(run({"strength", cfg, "--out", (dir / "out2").string()}).code == cli::exit_invalid_input);
    CHECK(listing(dir / "out2").empty());
  }

  TEST_CASE("malformed input exits with 1")
  {
    test::TempDir dir;
    const auto cfg = scenario(dir, "id,x,y\nA1,500\n").string();
    const auto r = run({"strength", cfg});
    CHECK(r.code == cli::exit_invalid_input);
    CHECK(r.err.find("row 2") != std::string::npos);
  }

  TEST_CASE("a degenerate prior exits with 3 and leaves no partial output")
  {
    test::TempDir dir;
    test::spit(dir / "w.csv", "class,weight\nwater,0\n");
    test::spit(dir / "f.csv", "tile_id,water\n0,1\n1,1\n2,1\n");
    const auto cfg = scenario(dir, "id,x,y,height,power,path_loss_exp\na,500,500,0,10,4\n",
                              R"(, "landuse": {"weights": "w.csv", "fractions": "f.csv"},
                                   "prior": {"kind": "landuse"})")
                         .string();
    const auto out = dir / "out";
    CHECK(run({"posterior", cfg, "--out", out.string()}).code == cli::exit_invariant);
    CHECK(listing(out).empty());
  }

  TEST_CASE("help exits cleanly")
  {
    const auto r = run({"--help"});
    CHECK(r.code == 0);
    CHECK(r.out.find("run-all") != std::string::npos);
  }
}
