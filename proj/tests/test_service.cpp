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
#include "cellloc/io.hpp"
#include "cellloc/service.hpp"

#include "support.hpp"

#include <doctest.h>
#include <httplib.h>
#include <json.hpp>

#include <sstream>
#include <thread>

using namespace cellloc;
using namespace cellloc::service;
using nlohmann::json;

namespace
{

Service load(const char* fixture)
{
  auto cfg = RunConfig::load(test::fixtures() / fixture / "config.json");
  auto ds = load_dataset(cfg);
  return Service(std::move(cfg), std::move(ds), 2);
}

Response get(Service& s, const std::string& path, std::map<std::string, std::string> query = {})
{
  return s.handle({"GET", path, std::move(query), ""});
}

Response post(Service& s, const std::string& body)
{
  return s.handle({"POST", "/params", {}, body});
}

std::vector<double> dense_values(const json& body, std::int64_t n)
{
  std::vector<double> v(static_cast<std::size_t>(n), 0.0);
  for (const auto& e : body["values"])
    v[e[0].get<std::size_t>()] = e[1].get<double>();
  return v;
}

void check_exact(const std::vector<double>& got, const std::vector<double>& expected)
{
  REQUIRE(got.size() == expected.size());
  for (std::size_t i = 0; i < got.size(); ++i)
    CHECK_MESSAGE(std::abs(got[i] - expected[i]) <= 1e-12, "tile ", i, ": ", got[i]);
}

} // namespace

TEST_SUITE("service")
{
  TEST_CASE("cells and grid metadata")
  {
    auto s = load("island");
    const auto r = get(s, "/cells");
    CHECK(r.status == 200);
    const auto j = json::parse(r.body);
    CHECK(j["grid"]["n_cols"] == 3);
    CHECK(j["grid"]["tile_size"] == 1000.0);
    REQUIRE(j["cells"].size() == 2);
    CHECK(j["cells"][1]["id"] == "a2");
    CHECK(j["cells"][1]["x"] == 2250.0);
    CHECK(j["cells"][1]["directional"] == false);
  }

  TEST_CASE("island posteriors through the API")
  {
    auto s = load("island");
    const auto r = get(s, "/posterior", {{"prior", "composite"}, {"likelihood", "strength"}, {"cell", "a2"}});
    REQUIRE(r.status == 200);
    check_exact(dense_values(json::parse(r.body), 3), {0, 5.0 / 7, 2.0 / 7});

    const auto u = get(s, "/posterior", {{"prior", "uniform"}, {"cell", "a1"}});
    check_exact(dense_values(json::parse(u.body), 3), {2.0 / 3, 1.0 / 3, 0});

    const auto p = get(s, "/prior", {{"kind", "composite"}, {"pi", "0,0.5,0.5"}});
    check_exact(dense_values(json::parse(p.body), 3), {0.25, 0.625, 0.125});
    const auto n = get(s, "/prior", {{"kind", "network"}});
    check_exact(dense_values(json::parse(n.body), 3), {0.25, 0.5, 0.25});

    const auto l = get(s, "/likelihood", {{"kind", "strength"}, {"cell", "a1"}});
    check_exact(dense_values(json::parse(l.body), 3), {1, 0.5, 0});

    const auto d = get(s, "/field", {{"kind", "dominance"}, {"cell", "a1"}});
    check_exact(dense_values(json::parse(d.body), 3), {1, 1, 0});
  }

  TEST_CASE("tessellations")
  {
    auto s = load("island");
    const auto v = json::parse(get(s, "/tessellation", {{"kind", "voronoi"}}).body);
    CHECK(v["values"] == json::parse(R"([[0, "a1"], [1, "a1"], [2, "a2"]])"));
    const auto b = json::parse(get(s, "/tessellation", {{"kind", "bestserver"}}).body);
    CHECK(b["values"] == json::parse(R"([[0, "a1"], [1, "a1"], [2, "a2"]])"));
    CHECK(get(s, "/tessellation", {{"kind", "hex"}}).status == 400);
  }

  TEST_CASE("error statuses")
  {
    auto s = load("island");
    CHECK(get(s, "/posterior", {{"cell", "zz"}}).status == 404);
    CHECK(get(s, "/field", {{"cell", "zz"}}).status == 404);
    CHECK(get(s, "/nowhere").status == 404);

    const auto tau = get(s, "/posterior_ta", {{"cell", "a1"}, {"tau", "1283"}});
    CHECK(tau.status == 400);
    CHECK(json::parse(tau.body)["field"] == "tau");
    CHECK(get(s, "/posterior_ta", {{"cell", "a1"}, {"tau", "x"}}).status == 400);
    CHECK(get(s, "/posterior_ta", {{"cell", "a1"}}).status == 400);
    CHECK(get(s, "/posterior", {{"cell", "a1"}, {"prior", "bogus"}}).status == 400);
    CHECK(get(s, "/prior", {{"kind", "composite"}, {"pi", "0.5,0.5,0.5"}}).status == 400);
    CHECK(get(s, "/prior", {{"kind", "composite"}, {"pi", "1,0"}}).status == 400);
    CHECK(s.handle({"DELETE", "/cells", {}, ""}).status == 405);

    const auto steep = post(s, R"({"S_steep": 0})");
    CHECK(steep.status == 400);
    CHECK(json::parse(steep.body)["field"] == "S_steep");
    CHECK(post(s, R"({"S_mid": "loud"})").status == 400);
    CHECK(post(s, R"({"colour": 1})").status == 400);
    CHECK(post(s, "not json").status == 400);
    CHECK(post(s, R"({"gamma_default": 0})").status == 400);
    // Rejected updates leave the parameters alone.
    CHECK(s.params().dominance.s_steep == 5.0);
  }

  TEST_CASE("a degenerate prior reports the invariant")
  {
    auto s = load("island");
    // No dominance survives a midpoint far above every strength.
    REQUIRE(post(s, R"({"S_mid": 500, "min_dominance": 0.5})").status == 200);
    const auto r = get(s, "/prior", {{"kind", "network"}});
    CHECK(r.status == 500);
    CHECK(json::parse(r.body).contains("invariant"));
  }

  TEST_CASE("cache reuse follows parameter dependencies")
  {
    auto s = load("application");
    const std::map<std::string, std::string> q{{"kind", "dominance"}, {"cell", "A1"}};
    REQUIRE(get(s, "/field", q).status == 200);
    CHECK(s.stats().strength == 1);
    CHECK(s.stats().dominance == 1);

    get(s, "/posterior", {{"cell", "A2"}});
    CHECK(s.stats().strength == 1);
    CHECK(s.stats().dominance == 1);

    // Identical parameters: no invalidation.
    const auto current = s.params();
    const auto key = s.dominance_key();
    REQUIRE(post(s, json{{"S_mid", current.dominance.s_mid}, {"S_steep", current.dominance.s_steep}}.dump())
                .status == 200);
    CHECK(s.dominance_key() == key);
    get(s, "/field", q);
    CHECK(s.stats().strength == 1);
    CHECK(s.stats().dominance == 1);

    // Logistic change: strength reused, dominance recomputed.
    const auto skey = s.strength_key();
    REQUIRE(post(s, R"({"S_mid": -95})").status == 200);
    CHECK(s.strength_key() == skey);
    CHECK(s.dominance_key() != key);
    get(s, "/field", q);
    CHECK(s.stats().strength == 1);
    CHECK(s.stats().dominance == 2);

    // Every cell here states its exponent, so a new default changes nothing.
    REQUIRE(post(s, R"({"gamma_default": 4})").status == 200);
    CHECK(s.strength_key() == skey);
    get(s, "/field", q);
    CHECK(s.stats().strength == 1);
    CHECK(s.stats().dominance == 2);

    // Pattern loss: full recompute.
    REQUIRE(post(s, R"({"azimuth_max_loss": 25})").status == 200);
    CHECK(s.strength_key() != skey);
    get(s, "/field", q);
    CHECK(s.stats().strength == 2);
    CHECK(s.stats().dominance == 3);
  }

  TEST_CASE("responses equal the library and CLI computations")
  {
    auto s = load("application");
    const auto cfg = RunConfig::load(test::fixtures() / "application" / "config.json");
    const auto ds = load_dataset(cfg);
    const auto plan = apply_defaults(ds.raw_plan, cfg.cell_defaults);

    // Strength field.
    const auto fields = compute_fields(plan, ds.grid, cfg.dominance, cfg.patterns, 1);
    const auto body = json::parse(get(s, "/field", {{"kind", "strength"}, {"cell", "B2"}}).body);
    const auto& col = fields.strength.columns[fields.strength.column_of("B2")];
    REQUIRE(body["values"].size() == col.size());
    for (std::size_t i = 0; i < col.size(); ++i)
    {
      CHECK(body["values"][i][0] == col[i].tile);
      CHECK(body["values"][i][1].get<double>() == col[i].value);
    }

    // Posterior and TA posterior against the CLI output tables.
    test::TempDir out;
    std::ostringstream o, e;
    REQUIRE(cli::run({"cellloc", "ta", (test::fixtures() / "application" / "config.json").string(), "--out",
                      out.path().string()},
                     o, e) == 0);
    REQUIRE(cli::run({"cellloc", "posterior", (test::fixtures() / "application" / "config.json").string(),
                      "--out", out.path().string()},
                     o, e) == 0);
    for (const bool ta : {false, true})
    {
      const auto rows = io::parse_output(test::slurp(out / (ta ? "posterior_ta.csv" : "posterior.csv")));
      for (const char* cell : {"A1", "C3", "S1"})
      {
        std::map<std::string, std::string> q{{"cell", cell}};
        if (ta)
          q.insert({{"tau", "15"}, {"b", "1"}});
        const auto r = json::parse(get(s, ta ? "/posterior_ta" : "/posterior", q).body);
        std::vector<io::OutputRow> mine;
        for (const auto& v : r["values"])
          mine.push_back({cell, v[0].get<TileId>(), ta ? std::optional<int>(15) : std::nullopt,
                          v[1].get<double>()});
        std::vector<io::OutputRow> theirs;
        for (const auto& row : rows)
          if (row.cell_id == cell)
            theirs.push_back(row);
        // Same rows at the printed precision.
        CHECK(io::write_output(mine) == io::write_output(theirs));
      }
    }
  }

  TEST_CASE("identical state and query give identical bytes")
  {
    auto s = load("application");
    const std::map<std::string, std::string> q{{"cell", "D3"}, {"prior", "composite"}};
    const auto first = get(s, "/posterior", q).body;
    post(s, R"({"S_mid": -90})");
    post(s, R"({"S_mid": -92.5})");
    CHECK(get(s, "/posterior", q).body == first);
  }

  TEST_CASE("concurrent readers and a writer")
  {
    auto s = load("application");
    std::vector<std::thread> pool;
    std::atomic<int> failures{0};
    for (int i = 0; i < 4; ++i)
      pool.emplace_back([&, i] {
        for (int k = 0; k < 5; ++k)
        {
          const auto r = get(s, "/posterior", {{"cell", i % 2 ? "A1" : "B1"}});
          if (r.status != 200)
            ++failures;
        }
      });
    pool.emplace_back([&] {
      for (int k = 0; k < 5; ++k)
        if (post(s, json{{"S_mid", -92.5 - k}}.dump()).status != 200)
          ++failures;
    });
    for (auto& t : pool)
      t.join();
    CHECK(failures == 0);
  }

  TEST_CASE("http loopback with CORS")
  {
    auto s = load("island");
    HttpFrontend http(s);
    const int port = http.bind("127.0.0.1", 0);
    REQUIRE(port > 0);
    std::thread th([&] { http.run(); });
    httplib::Client client("127.0.0.1", port);
    client.set_connection_timeout(2);
    httplib::Result res;
    for (int attempt = 0; attempt < 100 && !res; ++attempt)
    {
      std::this_thread::sleep_for(std::chrono::milliseconds(20));
      res = client.Get("/posterior?prior=composite&cell=a2");
    }
    REQUIRE(res);
    CHECK(res->status == 200);
    CHECK(res->get_header_value("Access-Control-Allow-Origin") == "*");
    check_exact(dense_values(json::parse(res->body), 3), {0, 5.0 / 7, 2.0 / 7});

    const auto opt = client.Options("/params");
    REQUIRE(opt);
    CHECK(opt->status == 204);
    CHECK(opt->get_header_value("Access-Control-Allow-Methods").find("POST") != std::string::npos);

    const auto bad = client.Post("/params", R"({"S_steep": 0})", "application/json");
    REQUIRE(bad);
    CHECK(bad->status == 400);

    CHECK(client.Get("/posterior?cell=nope")->status == 404);
    http.stop();
    th.join();
  }
}
