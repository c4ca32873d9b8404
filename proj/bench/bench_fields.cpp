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


// Serial reference against the OpenMP field kernel at several thread counts.

#include "cellloc/cellplan.hpp"
#include "cellloc/geo.hpp"
#include "cellloc/propagation.hpp"
#include "cellloc/voronoi.hpp"

#include "support.hpp"

#include <benchmark/benchmark.h>

#include <map>
#include <random>

using namespace cellloc;

namespace
{

// Square region of 100 m tiles with three-sector sites at random positions.
struct Region
{
  Grid grid;
  CellPlan plan;
  explicit Region(std::int64_t side)
      : grid({0, 0}, 100, side, side)
  {
    std::mt19937_64 rng(side);
    const double extent = 100.0 * static_cast<double>(side);
    std::uniform_real_distribution<double> pos(0.0, extent);
    const auto sites = std::max<std::int64_t>(1, side * side / 1000);
    for (std::int64_t s = 0; s < sites; ++s)
    {
      const double x = pos(rng), y = pos(rng);
      for (int k = 0; k < 3; ++k)
        plan.cells.push_back(test::directional_cell("M" + std::to_string(s) + "_" + std::to_string(k), x,
                                                    y, 120.0 * k + 30, 30, 4, 20));
    }
  }
};

const Region& region(std::int64_t side)
{
  static std::map<std::int64_t, Region> cache;
  auto it = cache.find(side);
  if (it == cache.end())
    it = cache.emplace(side, Region(side)).first;
  return it->second;
}

void set_counters(benchmark::State& state, const Region& r)
{
  const auto pairs = static_cast<double>(r.grid.size()) * static_cast<double>(r.plan.cells.size());
  state.counters["pairs/s"] = benchmark::Counter(pairs, benchmark::Counter::kIsIterationInvariantRate);
  state.counters["cells"] = static_cast<double>(r.plan.cells.size());
}

void BM_FieldsReference(benchmark::State& state)
{
  const auto& r = region(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(compute_fields_reference(r.plan, r.grid, DominanceParams{}));
  set_counters(state, r);
}

void BM_FieldsParallel(benchmark::State& state)
{
  const auto& r = region(state.range(0));
  const int threads = static_cast<int>(state.range(1));
  for (auto _ : state)
    benchmark::DoNotOptimize(compute_fields(r.plan, r.grid, DominanceParams{}, {}, threads));
  set_counters(state, r);
}

void BM_Voronoi(benchmark::State& state)
{
  const auto& r = region(state.range(0));
  const int threads = static_cast<int>(state.range(1));
  for (auto _ : state)
    benchmark::DoNotOptimize(voronoi_assign(r.plan, r.grid, 100.0, threads));
  set_counters(state, r);
}

} // namespace

BENCHMARK(BM_FieldsReference)->Arg(100)->Arg(250)->Unit(benchmark::kMillisecond)
    ->UseRealTime();
BENCHMARK(BM_FieldsParallel)
    ->ArgsProduct({{100, 250}, {1, 2, 4, 8}})
    ->ArgNames({"side", "threads"})
    ->Unit(benchmark::kMillisecond)
    ->UseRealTime();
BENCHMARK(BM_Voronoi)
    ->ArgsProduct({{250}, {1, 4}})
    ->ArgNames({"side", "threads"})
    ->Unit(benchmark::kMillisecond)
    ->UseRealTime();

BENCHMARK_MAIN();
