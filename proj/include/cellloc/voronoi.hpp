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

#include "cellloc/cellplan.hpp"
#include "cellloc/geo.hpp"
#include "cellloc/propagation.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace cellloc
{

// Assignment of tiles to cells. `owner[t]` indexes `cell_ids`, or is
// `unassigned`. Cells without any tile stay listed in `cell_ids`.
struct Tessellation
{
  static constexpr std::int32_t unassigned = -1;

  std::vector<std::string> cell_ids;
  std::vector<std::int32_t> owner;

  std::int64_t n_tiles() const noexcept { return static_cast<std::int64_t>(owner.size()); }
  std::optional<std::string> owner_of(TileId t) const;
  std::vector<TileId> region(const std::string& cell) const;
  bool total() const noexcept;

  friend bool operator==(const Tessellation&, const Tessellation&) = default;
};

// Nearest-seed tessellation over macro cells, seeds of directional cells
// moved `shift` meters along the azimuth, then every tile holding a small
// cell handed to that small cell. Ties go to the lexicographically smallest
// id. Throws DomainError when the plan has no macro cell.
Tessellation voronoi_assign(const CellPlan& plan, const Grid& grid, double shift = 100.0,
                            int threads = 0);

// 1 iff the tessellation assigns t to `cell`.
int s_vor(const Tessellation& tess, TileId t, const std::string& cell);

// Tile -> strongest cell; ties to the smallest id, uncovered tiles unassigned.
Tessellation best_server(const SparseField& strength);

} // namespace cellloc
