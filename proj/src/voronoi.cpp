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


#include "cellloc/voronoi.hpp"

#include "cellloc/error.hpp"
#include "cellloc/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace cellloc
{

std::optional<std::string> Tessellation::owner_of(TileId t) const
{
  if (t < 0 || t >= n_tiles())
    throw RangeError("tile " + std::to_string(t) + " outside tessellation");
  const auto o = owner[static_cast<std::size_t>(t)];
  if (o == unassigned)
    return std::nullopt;
  return cell_ids[static_cast<std::size_t>(o)];
}

std::vector<TileId> Tessellation::region(const std::string& cell) const
{
  const auto it = std::find(cell_ids.begin(), cell_ids.end(), cell);
  if (it == cell_ids.end())
    throw RangeError("unknown cell '" + cell + "'");
  const auto idx = static_cast<std::int32_t>(it - cell_ids.begin());
  std::vector<TileId> tiles;
  for (std::size_t t = 0; t < owner.size(); ++t)
    if (owner[t] == idx)
      tiles.push_back(static_cast<TileId>(t));
  return tiles;
}

bool Tessellation::total() const noexcept
{
  return std::none_of(owner.begin(), owner.end(), [](std::int32_t o) { return o == unassigned; });
}

namespace
{

struct Seed
{
  Point2 p;
  std::int32_t cell;
};

// Indices of `ids` in lexicographic order.
std::vector<std::int32_t> id_order(const std::vector<std::string>& ids)
{
  std::vector<std::int32_t> order(ids.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::int32_t a, std::int32_t b) { return ids[a] < ids[b]; });
  return order;
}

} // namespace

Tessellation voronoi_assign(const CellPlan& plan, const Grid& grid, double shift, int threads)
{
  Tessellation tess;
  for (const auto& c : plan.cells)
    tess.cell_ids.push_back(c.id);

  // Seeds in id order so that a strict '<' comparison breaks ties by id.
  std::vector<Seed> seeds;
  for (const auto a : id_order(tess.cell_ids))
  {
    const auto& c = plan.cells[static_cast<std::size_t>(a)];
    if (c.is_small())
      continue;
    Point2 p = c.position();
    if (c.is_directional())
    {
      const double az = c.azimuth.value_or(0.0) * std::numbers::pi / 180.0;
      p.x += shift * std::sin(az);
      p.y += shift * std::cos(az);
    }
    seeds.push_back({p, a});
  }
  if (seeds.empty())
    throw DomainError("voronoi: the cell plan has no macro cell");

  const std::int64_t n_tiles = grid.size();
  tess.owner.assign(static_cast<std::size_t>(n_tiles), Tessellation::unassigned);

#pragma omp parallel for schedule(static) num_threads(resolve_threads(threads))
  for (std::int64_t t = 0; t < n_tiles; ++t)
  {
    const Point2 c = grid.centroid(t);
    double best = INFINITY;
    std::int32_t owner = Tessellation::unassigned;
    for (const auto& s : seeds)
    {
      const double dx = c.x - s.p.x;
      const double dy = c.y - s.p.y;
      const double d2 = dx * dx + dy * dy;
      if (d2 < best)
      {
        best = d2;
        owner = s.cell;
      }
    }
    tess.owner[static_cast<std::size_t>(t)] = owner;
  }

  // Small-cell carve-out; iterating in reverse id order leaves the smallest id
  // when several small cells share a tile.
  const auto order = id_order(tess.cell_ids);
  for (auto it = order.rbegin(); it != order.rend(); ++it)
  {
    const auto& c = plan.cells[static_cast<std::size_t>(*it)];
    if (!c.is_small())
      continue;
    if (const auto t = grid.locate(c.position()))
      tess.owner[static_cast<std::size_t>(*t)] = *it;
  }
  return tess;
}

int s_vor(const Tessellation& tess, TileId t, const std::string& cell)
{
  const auto o = tess.owner_of(t);
  return (o && *o == cell) ? 1 : 0;
}

Tessellation best_server(const SparseField& strength)
{
  Tessellation tess;
  tess.cell_ids = strength.cell_ids;
  tess.owner.assign(static_cast<std::size_t>(strength.n_tiles), Tessellation::unassigned);
  std::vector<double> best(static_cast<std::size_t>(strength.n_tiles), -INFINITY);

  for (const auto a : id_order(strength.cell_ids))
  {
    for (const auto& e : strength.columns[static_cast<std::size_t>(a)])
    {
      const auto t = static_cast<std::size_t>(e.tile);
      if (tess.owner[t] == Tessellation::unassigned || e.value > best[t])
      {
        best[t] = e.value;
        tess.owner[t] = a;
      }
    }
  }
  return tess;
}

} // namespace cellloc
