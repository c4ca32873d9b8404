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

#include <json.hpp>

#include <algorithm>
#include <map>
#include <utility>

namespace cellloc::io
{

namespace
{

using json = nlohmann::json;

// Integer lattice vertex (col, row) of the tile grid.
using Vertex = std::pair<std::int64_t, std::int64_t>;

struct Edge
{
  Vertex from;
  Vertex to;
};

Vertex direction(const Edge& e)
{
  return {e.to.first - e.from.first, e.to.second - e.from.second};
}

// Rank of the turn from `in` to `out`: left 0, straight 1, right 2, back 3.
int turn_rank(Vertex in, Vertex out)
{
  const auto cross = in.first * out.second - in.second * out.first;
  const auto dot = in.first * out.first + in.second * out.second;
  if (cross > 0)
    return 0;
  if (cross == 0 && dot > 0)
    return 1;
  if (cross < 0)
    return 2;
  return 3;
}

using Ring = std::vector<Vertex>;

double signed_area(const Ring& ring)
{
  double a = 0.0;
  for (std::size_t i = 0; i < ring.size(); ++i)
  {
    const auto& p = ring[i];
    const auto& q = ring[(i + 1) % ring.size()];
    a += static_cast<double>(p.first * q.second - q.first * p.second);
  }
  return a / 2.0;
}

// Even-odd test of a point strictly inside or outside the ring.
bool inside(const Ring& ring, double x, double y)
{
  bool in = false;
  for (std::size_t i = 0, j = ring.size() - 1; i < ring.size(); j = i++)
  {
    const double xi = static_cast<double>(ring[i].first), yi = static_cast<double>(ring[i].second);
    const double xj = static_cast<double>(ring[j].first), yj = static_cast<double>(ring[j].second);
    if ((yi > y) != (yj > y) && x < (xj - xi) * (y - yi) / (yj - yi) + xi)
      in = !in;
  }
  return in;
}

Ring drop_collinear(const Ring& ring)
{
  Ring out;
  const auto n = ring.size();
  for (std::size_t i = 0; i < n; ++i)
  {
    const auto& prev = ring[(i + n - 1) % n];
    const auto& cur = ring[i];
    const auto& next = ring[(i + 1) % n];
    const Vertex d1{cur.first - prev.first, cur.second - prev.second};
    const Vertex d2{next.first - cur.first, next.second - cur.second};
    if (d1.first * d2.second - d1.second * d2.first != 0)
      out.push_back(cur);
  }
  return out;
}

// Outline of a set of tiles as polygons (outer ring first, then holes), in
// lattice coordinates. Boundary edges keep the region on their left, so outer
// rings run counter-clockwise and holes clockwise. At pinch vertices the
// leftmost turn keeps diagonally touching tiles in separate rings.
std::vector<std::vector<Ring>> dissolve(const std::vector<TileId>& tiles, const Grid& grid)
{
  std::vector<bool> member(static_cast<std::size_t>(grid.size()), false);
  for (const auto t : tiles)
    member[static_cast<std::size_t>(t)] = true;
  auto in = [&](std::int64_t r, std::int64_t c) {
    return r >= 0 && c >= 0 && r < grid.n_rows() && c < grid.n_cols() &&
           member[static_cast<std::size_t>(r * grid.n_cols() + c)];
  };

  std::vector<Edge> edges;
  for (const auto t : tiles)
  {
    const auto r = grid.row(t);
    const auto c = grid.col(t);
    if (!in(r - 1, c))
      edges.push_back({{c, r}, {c + 1, r}});
    if (!in(r, c + 1))
      edges.push_back({{c + 1, r}, {c + 1, r + 1}});
    if (!in(r + 1, c))
      edges.push_back({{c + 1, r + 1}, {c, r + 1}});
    if (!in(r, c - 1))
      edges.push_back({{c, r + 1}, {c, r}});
  }

  std::multimap<Vertex, std::size_t> outgoing;
  for (std::size_t i = 0; i < edges.size(); ++i)
    outgoing.emplace(edges[i].from, i);
  std::vector<bool> used(edges.size(), false);

  std::vector<Ring> outers;
  std::vector<Ring> holes;
  std::vector<Vertex> hole_probe; // member tile (col, row) left of a hole edge
  for (std::size_t start = 0; start < edges.size(); ++start)
  {
    if (used[start])
      continue;
    Ring ring;
    std::size_t cur = start;
    while (!used[cur])
    {
      used[cur] = true;
      ring.push_back(edges[cur].from);
      const auto [lo, hi] = outgoing.equal_range(edges[cur].to);
      std::size_t next = cur;
      int best = 4;
      for (auto it = lo; it != hi; ++it)
      {
        if (used[it->second])
          continue;
        const int rank = turn_rank(direction(edges[cur]), direction(edges[it->second]));
        if (rank < best)
        {
          best = rank;
          next = it->second;
        }
      }
      if (next == cur)
        break;
      cur = next;
    }
    ring = drop_collinear(ring);
    if (signed_area(ring) > 0)
      outers.push_back(std::move(ring));
    else
    {
      // Tile on the left of the ring's first edge belongs to the region.
      const auto& e = edges[start];
      const auto d = direction(e);
      const std::int64_t c = std::min(e.from.first, e.to.first) - (d.second > 0 ? 1 : 0);
      const std::int64_t r = std::min(e.from.second, e.to.second) - (d.first < 0 ? 1 : 0);
      hole_probe.push_back({c, r});
      holes.push_back(std::move(ring));
    }
  }

  std::vector<std::vector<Ring>> polygons;
  for (auto& o : outers)
    polygons.push_back({std::move(o)});
  for (std::size_t h = 0; h < holes.size(); ++h)
  {
    const double px = static_cast<double>(hole_probe[h].first) + 0.5;
    const double py = static_cast<double>(hole_probe[h].second) + 0.5;
    for (auto& poly : polygons)
      if (inside(poly.front(), px, py))
      {
        poly.push_back(std::move(holes[h]));
        break;
      }
  }
  return polygons;
}

json ring_coords(const Ring& ring, const Grid& grid)
{
  json coords = json::array();
  auto point = [&](const Vertex& v) {
    return json::array({grid.origin().x + static_cast<double>(v.first) * grid.tile_size(),
                        grid.origin().y + static_cast<double>(v.second) * grid.tile_size()});
  };
  for (const auto& v : ring)
    coords.push_back(point(v));
  coords.push_back(point(ring.front()));
  return coords;
}

} // namespace

std::string tessellation_geojson(const Tessellation& tess, const Grid& grid)
{
  std::vector<std::vector<TileId>> regions(tess.cell_ids.size());
  for (std::size_t t = 0; t < tess.owner.size(); ++t)
    if (tess.owner[t] != Tessellation::unassigned)
      regions[static_cast<std::size_t>(tess.owner[t])].push_back(static_cast<TileId>(t));

  std::vector<std::size_t> order(tess.cell_ids.size());
  for (std::size_t i = 0; i < order.size(); ++i)
    order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return tess.cell_ids[a] < tess.cell_ids[b]; });

  json features = json::array();
  for (const auto a : order)
  {
    if (regions[a].empty())
      continue;
    json polys = json::array();
    for (const auto& poly : dissolve(regions[a], grid))
    {
      json rings = json::array();
      for (const auto& ring : poly)
        rings.push_back(ring_coords(ring, grid));
      polys.push_back(std::move(rings));
    }
    json geometry = polys.size() == 1
                        ? json{{"type", "Polygon"}, {"coordinates", polys[0]}}
                        : json{{"type", "MultiPolygon"}, {"coordinates", polys}};
    features.push_back({{"type", "Feature"},
                        {"properties", {{"cell_id", tess.cell_ids[a]}, {"n_tiles", regions[a].size()}}},
                        {"geometry", std::move(geometry)}});
  }
  return json{{"type", "FeatureCollection"}, {"features", std::move(features)}}.dump() + "\n";
}

std::string tiles_geojson(const std::vector<FieldEntry>& values, const Grid& grid,
                          const std::string& property)
{
  json features = json::array();
  for (const auto& e : values)
  {
    const auto r = grid.row(e.tile);
    const auto c = grid.col(e.tile);
    const Ring square{{c, r}, {c + 1, r}, {c + 1, r + 1}, {c, r + 1}};
    features.push_back({{"type", "Feature"},
                        {"properties", {{"tile_id", e.tile}, {property, e.value}}},
                        {"geometry", {{"type", "Polygon"},
                                      {"coordinates", json::array({ring_coords(square, grid)})}}}});
  }
  return json{{"type", "FeatureCollection"}, {"features", std::move(features)}}.dump() + "\n";
}

} // namespace cellloc::io
