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


#include "cellloc/bayes.hpp"
#include "cellloc/error.hpp"
#include "cellloc/priors.hpp"
#include "cellloc/voronoi.hpp"

#include "support.hpp"

#include <doctest.h>

#include <map>
#include <random>

using namespace cellloc;
using doctest::Approx;

namespace
{

std::vector<double> dense(const CellPosterior& p, std::int64_t n)
{
  std::vector<double> v(static_cast<std::size_t>(n), 0.0);
  for (const auto& e : p.probs)
    v[static_cast<std::size_t>(e.tile)] = e.value;
  return v;
}

void check_exact(const std::vector<double>& got, const std::vector<double>& expected)
{
  REQUIRE(got.size() == expected.size());
  for (std::size_t i = 0; i < got.size(); ++i)
    CHECK_MESSAGE(std::abs(got[i] - expected[i]) <= 1e-12, "tile ", i, ": ", got[i]);
}

TileDistribution dist(std::vector<double> p) { return {std::move(p)}; }

} // namespace

TEST_SUITE("bayes")
{
  TEST_CASE("island connection likelihood")
  {
    const auto l = connection_likelihood(test::island_dominance());
    check_exact({l.field.at(0, 0), l.field.at(0, 1), l.field.at(0, 2)}, {1, 0.5, 0});
    check_exact({l.field.at(1, 0), l.field.at(1, 1), l.field.at(1, 2)}, {0, 0.5, 1});
    check_exact(l.row_sums(), {1, 1, 1});
  }

  TEST_CASE("likelihood ignores dominance scale")
  {
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 50; ++trial)
    {
      const auto f = test::random_field(rng, 20, 5);
      const auto base = connection_likelihood(f);
      for (double k : {0.1, 2.0, 10.0})
      {
        const auto scaled = connection_likelihood(f.scaled(k));
        for (std::size_t a = 0; a < f.n_cells(); ++a)
          for (TileId t = 0; t < 20; ++t)
            CHECK(std::abs(scaled.field.at(a, t) - base.field.at(a, t)) <= 1e-12);
      }
    }
  }

  TEST_CASE("uncovered tiles get no likelihood row")
  {
    SparseField f;
    f.n_tiles = 4;
    f.cell_ids = {"a", "b"};
    f.columns = {{{0, 0.3}}, {{0, 0.1}, {1, 0.7}}};
    const auto l = connection_likelihood(f);
    check_exact(l.row_sums(), {1, 1, 0, 0});
    CHECK(l.field.at(1, 1) == 1.0);
    CHECK(l.field.at(0, 0) == Approx(0.75));
  }

  TEST_CASE("voronoi likelihood is one-hot")
  {
    Tessellation tess;
    tess.cell_ids = {"a1", "a2"};
    tess.owner = {0, 0, 1};
    const auto l = voronoi_likelihood(tess);
    check_exact({l.field.at(0, 0), l.field.at(0, 1), l.field.at(0, 2)}, {1, 1, 0});
    check_exact(l.row_sums(), {1, 1, 1});
    const auto post = posterior(uniform_prior(test::island_grid()), l);
    check_exact(dense(post.of("a1"), 3), {0.5, 0.5, 0});
    check_exact(dense(post.of("a2"), 3), {0, 0, 1});
  }

  TEST_CASE("island posteriors")
  {
    const auto l = connection_likelihood(test::island_dominance());
    const std::map<std::string, std::pair<TileDistribution, std::vector<std::vector<double>>>> rows = {
        {"uniform", {dist({1.0 / 3, 1.0 / 3, 1.0 / 3}), {{2.0 / 3, 1.0 / 3, 0}, {0, 1.0 / 3, 2.0 / 3}}}},
        {"landuse", {dist({0.25, 0.75, 0}), {{0.4, 0.6, 0}, {0, 1, 0}}}},
        {"network", {dist({0.25, 0.5, 0.25}), {{0.5, 0.5, 0}, {0, 0.5, 0.5}}}},
        {"composite", {dist({0.25, 0.625, 0.125}), {{4.0 / 9, 5.0 / 9, 0}, {0, 5.0 / 7, 2.0 / 7}}}},
    };
    for (const auto& [name, row] : rows)
    {
      CAPTURE(name);
      const auto post = posterior(row.first, l);
      check_exact(dense(post.of("a1"), 3), row.second[0]);
      check_exact(dense(post.of("a2"), 3), row.second[1]);
    }
  }

  TEST_CASE("posterior ignores prior scale")
  {
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> u(0.01, 1);
    for (int trial = 0; trial < 30; ++trial)
    {
      const auto l = connection_likelihood(test::random_field(rng, 15, 4));
      std::vector<double> p(15);
      for (auto& v : p)
        v = u(rng);
      std::vector<double> q = p;
      for (auto& v : q)
        v *= 7.5;
      const auto a = posterior(dist(p), l);
      const auto b = posterior(dist(q), l);
      for (std::size_t c = 0; c < a.cells.size(); ++c)
        for (TileId t = 0; t < 15; ++t)
          CHECK(std::abs(a.cells[c].at(t) - b.cells[c].at(t)) <= 1e-12);
    }
  }

  TEST_CASE("a cell without support is flagged empty")
  {
    const auto l = connection_likelihood(test::island_dominance());
    const auto post = posterior(dist({1, 0, 0}), l);
    CHECK_FALSE(post.of("a1").empty);
    CHECK(post.of("a2").empty);
    CHECK(post.of("a2").probs.empty());
    CHECK_THROWS_AS(post.of("zz"), RangeError);
    CHECK_THROWS_AS(posterior(dist({0.5, 0.5}), l), MismatchError);
  }

  TEST_CASE("network prior with strength likelihood is proportional to dominance")
  {
    std::mt19937_64 rng(44);
    for (int trial = 0; trial < 30; ++trial)
    {
      const auto f = test::random_field(rng, 20, 5);
      const auto post = posterior(network_prior(f), connection_likelihood(f));
      for (std::size_t a = 0; a < f.n_cells(); ++a)
      {
        double total = 0;
        for (const auto& e : f.columns[a])
          total += e.value;
        for (const auto& e : f.columns[a])
          CHECK(std::abs(post.cells[a].at(e.tile) - e.value / total) <= 1e-9);
      }
    }
  }

  TEST_CASE("timing advance annulus radii")
  {
    const TimingAdvanceSpec s15{15, 78.12, 1};
    const auto a = s15.annulus({0, 0});
    CHECK(a.inner_radius == Approx(1093.68).epsilon(1e-12));
    CHECK(a.outer_radius == Approx(1328.04).epsilon(1e-12));
    const auto b = TimingAdvanceSpec{25, 78.12, 1}.annulus({0, 0});
    CHECK(b.inner_radius == Approx(1874.88).epsilon(1e-12));
    CHECK(b.outer_radius == Approx(2109.24).epsilon(1e-12));
    // b = 0 spans a single band; tau = 0 starts at the antenna.
    const auto c = TimingAdvanceSpec{0, 78.12, 0}.annulus({0, 0});
    CHECK(c.inner_radius == 0.0);
    CHECK(c.outer_radius == Approx(78.12));
    CHECK(TimingAdvanceSpec{1, 78.12, 3}.annulus({0, 0}).inner_radius == 0.0);
  }

  TEST_CASE("timing advance spec is checked")
  {
    CHECK_THROWS_AS((TimingAdvanceSpec{1283}).check(), RangeError);
    CHECK_THROWS_AS((TimingAdvanceSpec{-1}).check(), RangeError);
    CHECK_NOTHROW((TimingAdvanceSpec{1282}).check());
    CHECK_THROWS_AS((TimingAdvanceSpec{5, 0.0}).check(), DomainError);
    CHECK_THROWS_AS((TimingAdvanceSpec{5, 78.12, -1}).check(), DomainError);
  }

  TEST_CASE("timing advance update masks and renormalizes")
  {
    // 40 x 1 strip of 100 m tiles, one omni cell at the west edge.
    const Grid g({0, 0}, 100, 40, 1);
    const CellPlan plan{{test::omni_cell("a", 0, 50)}};
    LikelihoodField l;
    l.field.n_tiles = g.size();
    l.field.cell_ids = {"a"};
    l.field.columns.resize(1);
    for (TileId t = 0; t < g.size(); ++t)
      l.field.columns[0].push_back({t, 1.0});
    const auto post = posterior(uniform_prior(g), l);

    const auto r = ta_update(post, "a", {15, 78.12, 1}, g, plan);
    CHECK_FALSE(r.empty);
    CHECK(r.tau == 15);
    // Centroids at 50, 150, ...; those in [1093.68, 1328.04) are 1150 and 1250.
    REQUIRE(r.probs.size() == 2);
    CHECK(r.probs[0].tile == 11);
    CHECK(r.probs[1].tile == 12);
    CHECK(r.probs[0].value == Approx(0.5));

    // One supported tile gets everything.
    const auto one = ta_update(post, "a", {0, 78.12, 0}, g, plan);
    REQUIRE(one.probs.size() == 1);
    CHECK(one.probs[0].value == 1.0);

    // Beyond the strip: empty.
    CHECK(ta_update(post, "a", {100, 78.12, 1}, g, plan).empty);
    CHECK_THROWS_AS(ta_update(post, "b", {1}, g, plan), RangeError);
  }

  TEST_CASE("an annulus covering the support is the identity")
  {
    const auto g = test::island_grid();
    const CellPlan plan{{test::omni_cell("a1", 750, 500), test::omni_cell("a2", 2250, 500)}};
    const auto post = posterior(uniform_prior(g), connection_likelihood(test::island_dominance()));
    const auto r = ta_update(post, "a1", {10, 78.12, 10}, g, plan);
    CHECK(r.probs == post.of("a1").probs);
  }

  TEST_CASE("likelihood kinds parse")
  {
    CHECK(parse_likelihood_kind("strength") == LikelihoodKind::strength);
    CHECK(parse_likelihood_kind("voronoi") == LikelihoodKind::voronoi);
    CHECK_THROWS_AS(parse_likelihood_kind("x"), DomainError);
  }
}
