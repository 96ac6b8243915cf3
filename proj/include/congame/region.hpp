// Copyright 2026 The congame authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CONGAME_REGION_HPP
#define CONGAME_REGION_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "congame/game.hpp"

namespace congame {

// Grid surrogate for a feasible region: cell-center feasibility mask plus
// axis-neighbor connected components. Coordinates are one player per axis.
struct GridRegion {
  std::vector<int> dims;
  Vec lower, upper;
  std::vector<std::uint8_t> mask;  // 1 = feasible at cell center
  std::vector<int> component;     // label per cell, -1 where infeasible
  int component_count = 0;

  long cells() const;
  long index(const std::vector<int>& idx) const;
  Vec cell_center(const std::vector<int>& idx) const;
};

// Cell-center rasterization followed by 4-connectivity (axis-neighbor) flood
// fill. Total cells capped at 1e7. Rows are evaluated in parallel when
// OpenMP is available; rasterize_serial is the reference implementation and
// both produce identical regions.
GridRegion rasterize(const std::vector<Constraint>& constraints, const Vec& lower,
                     const Vec& upper, const std::vector<int>& resolution);
GridRegion rasterize_serial(const std::vector<Constraint>& constraints, const Vec& lower,
                            const Vec& upper, const std::vector<int>& resolution);

// A gap in the feasible run of one component along one grid line. For
// playerwise-concave constraint systems every component's slice must be a
// contiguous interval, so the returned list must be empty.
struct SliceViolation {
  int axis = 0;
  std::vector<int> line;  // fixed indices on the other axes
  int component = 0;
  int gap_start = 0, gap_end = 0;  // [gap_start, gap_end) infeasible cells
};

std::vector<SliceViolation> slice_convexity_check(const GridRegion& region);

// Per-component support mask over the grid of the non-`player_axis`
// coordinates: 1 where the component has a feasible cell on that line.
std::vector<std::vector<std::uint8_t>> component_slice_support(const GridRegion& region,
                                                               int player_axis);

// PGM (P2 ASCII) export of the mask; feasible cells white.
void write_pgm(std::ostream& os, const GridRegion& region);

// CSV: component,cells,min/max index per axis.
void write_component_csv(std::ostream& os, const GridRegion& region);

std::string slice_convexity_report(const GridRegion& region);

}  // namespace congame

#endif  // CONGAME_REGION_HPP
