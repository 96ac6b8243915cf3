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

#include <cmath>
#include <sstream>

#include "congame/games.hpp"
#include "congame/region.hpp"
#include "doctest.h"

namespace congame {
namespace {

const Vec kLo{0.0, 0.0};
const Vec kHi{1.0, 1.0};

std::vector<Constraint> constant_region(double value) {
  DifferentiableFn f;
  f.eval = [value](const StrategyProfile&) { return value; };
  f.grad = [](const StrategyProfile&) { return Vec{0.0, 0.0}; };
  return {Constraint::lower_bound(f, 0.0)};
}

TEST_CASE("rasterize: quadrant fixtures have two components at 400^2") {
  for (int which : {1, 2}) {
    const GridRegion region = rasterize(example_region(which), kLo, kHi, {400, 400});
    CHECK(region.component_count == 2);
  }
}

TEST_CASE("rasterize: trivial full box is one component") {
  const GridRegion region = rasterize(constant_region(1.0), kLo, kHi, {50, 50});
  CHECK(region.component_count == 1);
  for (auto m : region.mask) CHECK(m == 1);
}

TEST_CASE("rasterize: enforces resolution and cell budget") {
  CHECK_THROWS_AS(rasterize(constant_region(1.0), kLo, kHi, {1, 50}), std::invalid_argument);
  CHECK_THROWS_AS(rasterize(constant_region(1.0), kLo, kHi, {10000, 10000}),
                  std::invalid_argument);
}

TEST_CASE("slice convexity: playerwise-concave fixtures have zero violations") {
  std::vector<std::vector<Constraint>> fixtures;
  fixtures.push_back(example_region(1));
  fixtures.push_back(example_region(2));
  fixtures.push_back(identical_interest_game(1.0, 1.0, 0.85).constraints);
  for (const auto& constraints : fixtures) {
    for (int res : {100, 200, 400}) {
      const GridRegion region = rasterize(constraints, kLo, kHi, {res, res});
      CHECK(slice_convexity_check(region).empty());
    }
  }
}

TEST_CASE("slice convexity: the annulus counterexample is detected") {
  const GridRegion region = rasterize(non_concave_ring_region(), kLo, kHi, {200, 200});
  // The ring is one connected component whose rows through the middle split
  // into two runs around the inner disk.
  CHECK(region.component_count == 1);
  const auto violations = slice_convexity_check(region);
  CHECK(!violations.empty());
  const std::string report = slice_convexity_report(region);
  CHECK(report.find("slice_convexity_violations=0") == std::string::npos);
}

TEST_CASE("slice convexity: single-cell-wide region is trivially fine") {
  // Feasible only on a thin vertical strip, one cell wide at this resolution.
  DifferentiableFn f;
  f.eval = [](const StrategyProfile& p) { return 0.05 - std::abs(p.blocks[0][0] - 0.5); };
  f.grad = [](const StrategyProfile& p) {
    return Vec{p.blocks[0][0] < 0.5 ? 1.0 : -1.0, 0.0};
  };
  const GridRegion region =
      rasterize({Constraint::lower_bound(f, 0.0)}, kLo, kHi, {10, 10});
  CHECK(region.component_count == 1);
  CHECK(slice_convexity_check(region).empty());
}

TEST_CASE("component_slice_support: quadrant fixture excludes the center band") {
  const int res = 400;
  const GridRegion region = rasterize(example_region(2), kLo, kHi, {res, res});
  REQUIRE(region.component_count == 2);

  // Component of the north-east branch, located via a known feasible cell.
  const int i99 = static_cast<int>(0.99 * res);
  const int j55 = static_cast<int>(0.55 * res);
  REQUIRE(region.mask[region.index({i99, j55})] == 1);
  const int ne = region.component[region.index({i99, j55})];

  // Support of player 2 over the x_1 grid: empty near x_1 = 1/2 (the slice
  // there is empty), populated far out on the same side.
  const auto support = component_slice_support(region, 1);
  REQUIRE(static_cast<int>(support.size()) == 2);
  const int icenter = res / 2;
  CHECK(support[ne][icenter] == 0);
  CHECK(support[1 - ne][icenter] == 0);
  CHECK(support[ne][i99] == 1);
}

TEST_CASE("component_slice_support: full and empty boxes") {
  const GridRegion full = rasterize(constant_region(1.0), kLo, kHi, {20, 20});
  const auto full_support = component_slice_support(full, 0);
  REQUIRE(full_support.size() == 1);
  for (auto v : full_support[0]) CHECK(v == 1);

  const GridRegion empty = rasterize(constant_region(-1.0), kLo, kHi, {20, 20});
  CHECK(empty.component_count == 0);
  CHECK(component_slice_support(empty, 0).empty());
}

TEST_CASE("component count is non-increasing as resolution doubles") {
  std::vector<std::vector<Constraint>> fixtures;
  fixtures.push_back(example_region(1));
  fixtures.push_back(example_region(2));
  fixtures.push_back(identical_interest_game(1.0, 1.0, 0.85).constraints);
  for (const auto& constraints : fixtures) {
    int prev = 1 << 30;
    for (int res : {100, 200, 400}) {
      const GridRegion region = rasterize(constraints, kLo, kHi, {res, res});
      CHECK(region.component_count <= prev);
      prev = region.component_count;
    }
  }
}

TEST_CASE("parallel rasterization matches the serial reference") {
  const GridRegion a = rasterize(example_region(2), kLo, kHi, {300, 300});
  const GridRegion b = rasterize_serial(example_region(2), kLo, kHi, {300, 300});
  CHECK(a.mask == b.mask);
  CHECK(a.component == b.component);
  CHECK(a.component_count == b.component_count);
}

TEST_CASE("PGM and component CSV exports") {
  const GridRegion region = rasterize(example_region(2), kLo, kHi, {40, 40});
  std::ostringstream pgm;
  write_pgm(pgm, region);
  std::istringstream in(pgm.str());
  std::string magic;
  int w = 0, h = 0, maxval = 0;
  in >> magic >> w >> h >> maxval;
  CHECK(magic == "P2");
  CHECK(w == 40);
  CHECK(h == 40);
  CHECK(maxval == 255);
  long pixels = 0, v;
  while (in >> v) {
    CHECK((v == 0 || v == 255));
    ++pixels;
  }
  CHECK(pixels == 1600);

  std::ostringstream csv;
  write_component_csv(csv, region);
  std::istringstream lines(csv.str());
  std::string header;
  std::getline(lines, header);
  CHECK(header == "component,cells,min_0,max_0,min_1,max_1");
  int rows = 0;
  for (std::string line; std::getline(lines, line);) ++rows;
  CHECK(rows == region.component_count);
}

TEST_CASE("cell centers and indexing are consistent") {
  const GridRegion region = rasterize(constant_region(1.0), kLo, kHi, {10, 20});
  const Vec c = region.cell_center({0, 0});
  CHECK(c[0] == doctest::Approx(0.05).epsilon(1e-15));
  CHECK(c[1] == doctest::Approx(0.025).epsilon(1e-15));
  CHECK(region.index({0, 0}) == 0);
  CHECK(region.index({1, 0}) == 20);
  CHECK(region.index({0, 1}) == 1);
}

}  // namespace
}  // namespace congame
