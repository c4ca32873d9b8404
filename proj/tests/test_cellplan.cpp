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

#include "support.hpp"

#include <doctest.h>

#include <limits>
#include <random>

using namespace cellloc;

namespace
{

const Grid grid({0, 0}, 100, 10, 10);

Cell bare(std::string id, double x = 500, double y = 500)
{
  Cell c;
  c.id = std::move(id);
  c.x = x;
  c.y = y;
  return c;
}

} // namespace

TEST_SUITE("cellplan")
{
  TEST_CASE("duplicate ids are reported")
  {
    const auto plan = apply_defaults(CellPlan{{bare("A1"), bare("A1"), bare("B")}});
    const auto r = validate(plan, grid);
    CHECK(r.has("A1", "unique-id"));
    CHECK_FALSE(r.has("B", "unique-id"));
    CHECK(r.error_count() == 1);
  }

  TEST_CASE("directional cell without azimuth")
  {
    auto c = bare("D");
    c.directional = true;
    const auto r = validate(apply_defaults(CellPlan{{c}}), grid);
    CHECK(r.has("D", "azimuth-required"));
    CHECK_FALSE(r.ok());
  }

  TEST_CASE("cell far outside the grid is a warning only")
  {
    const auto r = validate(apply_defaults(CellPlan{{bare("far", 50500, 500)}}), grid);
    CHECK(r.has("far", "outside-grid"));
    CHECK(r.error_count() == 0);
    CHECK(r.warning_count() == 1);
    CHECK(r.ok());
  }

  TEST_CASE("empty plan and empty id")
  {
    CHECK(validate(CellPlan{}, grid).has("", "non-empty"));
    CHECK(validate(apply_defaults(CellPlan{{bare("")}}), grid).has("", "id-required"));
  }

  TEST_CASE("range rules")
  {
    auto c = bare("X");
    c.azimuth = 360;
    c.power = 0;
    c.path_loss_exponent = -1;
    c.height = -2;
    c.beam_h = 180;
    c.beam_v = 0;
    auto n = bare("N", std::numeric_limits<double>::quiet_NaN(), 0);
    const auto r = validate(apply_defaults(CellPlan{{c, n}}), grid);
    for (const char* rule :
         {"azimuth-range", "power-positive", "path-loss-positive", "height-nonnegative", "beam-range"})
      CHECK_MESSAGE(r.has("X", rule), rule);
    CHECK(r.has("N", "finite-position"));
  }

  TEST_CASE("a raw plan reports absent optional fields")
  {
    const auto r = validate(CellPlan{{bare("raw")}}, grid);
    CHECK(r.has("raw", "missing-field"));
  }

  TEST_CASE("defaults")
  {
    CellDefaults d;
    CHECK(d.power_macro == 10.0);
    CHECK(d.beam_h == 65.0);
    CHECK(d.beam_v == 9.0);
    CHECK(d.tilt == 4.0);
    CHECK(d.path_loss_exponent == 3.75);

    auto explicit_power = bare("p5");
    explicit_power.power = 5;
    auto small = bare("s");
    small.small = true;
    const auto plan = apply_defaults(CellPlan{{bare("m"), explicit_power, small}}, d);
    CHECK(*plan.cells[0].power == 10.0);
    CHECK(*plan.cells[1].power == 5.0);
    CHECK(*plan.cells[2].power == d.power_small);
    CHECK(*plan.cells[2].height == d.height_small);
    CHECK(*plan.cells[0].height == d.height_macro);
    // Mandatory fields are never touched.
    CHECK(plan.cells[1].id == "p5");
    CHECK(plan.cells[1].x == 500);
  }

  TEST_CASE("directional defaults to the presence of an azimuth")
  {
    auto with_az = bare("w");
    with_az.azimuth = 120;
    const auto plan = apply_defaults(CellPlan{{with_az, bare("o")}});
    CHECK(plan.cells[0].is_directional());
    CHECK_FALSE(plan.cells[1].is_directional());
  }

  TEST_CASE("apply_defaults is idempotent and leaves no missing fields")
  {
    std::mt19937_64 rng(5);
    std::bernoulli_distribution coin(0.5);
    std::uniform_real_distribution<double> u(0, 1000);
    for (int trial = 0; trial < 200; ++trial)
    {
      CellPlan p;
      for (int i = 0; i < 6; ++i)
      {
        auto c = bare("c" + std::to_string(i), u(rng), u(rng));
        if (coin(rng))
          c.height = u(rng) / 10;
        if (coin(rng))
          c.azimuth = u(rng) * 0.36;
        if (coin(rng))
          c.directional = c.azimuth.has_value();
        if (coin(rng))
          c.power = 1 + u(rng) / 100;
        if (coin(rng))
          c.small = coin(rng);
        if (coin(rng))
          c.tilt = u(rng) / 100;
        p.cells.push_back(c);
      }
      const auto once = apply_defaults(p);
      CHECK(apply_defaults(once) == once);
      const auto r = validate(once, grid);
      for (const auto& f : r.findings)
        CHECK(f.rule != "missing-field");
    }
  }

  TEST_CASE("lookup")
  {
    const CellPlan p{{bare("a"), bare("b")}};
    CHECK(p.find("b") == &p.cells[1]);
    CHECK(p.find("z") == nullptr);
    CHECK(p.index_of("b") == 1);
    CHECK_THROWS_AS(p.index_of("z"), RangeError);
  }
}
