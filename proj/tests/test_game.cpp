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
#include <limits>
#include <random>

#include "congame/game.hpp"
#include "congame/games.hpp"
#include "doctest.h"

namespace congame {
namespace {

GameSpec unconstrained_line_game() {
  GameSpec spec;
  spec.players = 1;
  spec.strategy_sets = {StrategySet::box({0.0}, {1.0})};
  DifferentiableFn u;
  u.eval = [](const StrategyProfile& p) { return p.blocks[0][0]; };
  u.grad = [](const StrategyProfile&) { return Vec{1.0}; };
  spec.utilities = {u};
  spec.lipschitz = 1.0;
  spec.smoothness = 1.0;
  spec.is_potential = true;
  spec.potential = u;
  spec.name = "line";
  return spec;
}

TEST_CASE("feasibility margins: identical-interest at the origin") {
  const GameSpec spec = identical_interest_game(1.0, 1.0, 0.85);
  StrategyProfile x;
  x.blocks = {{0.0}, {0.0}};
  const Vec margins = feasibility_margins(spec, x);
  REQUIRE(margins.size() == 1);
  CHECK(margins[0] == doctest::Approx(0.15).epsilon(1e-15));
  CHECK(min_margin(spec, x) == doctest::Approx(0.15).epsilon(1e-15));
}

TEST_CASE("feasibility margins: no constraints gives empty vector and +inf") {
  const GameSpec spec = unconstrained_line_game();
  StrategyProfile x;
  x.blocks = {{0.3}};
  CHECK(feasibility_margins(spec, x).empty());
  CHECK(min_margin(spec, x) == std::numeric_limits<double>::infinity());
}

TEST_CASE("feasibility margins: routing at uniform half flow, hand evaluated") {
  const GameSpec spec = routing_game(RoutingTopology::defaults());
  StrategyProfile x;
  x.blocks.assign(5, {0.5});
  const Vec margins = feasibility_margins(spec, x);
  REQUIRE(margins.size() == 2);
  // Capped link loads from the incidence: link 2 carries players 1-2 (load
  // 1.0, cap 2.7) and link 5 carries players 2-5 (load 2.0, cap 7).
  CHECK(margins[0] == doctest::Approx(2.7 - 1.0).epsilon(1e-12));
  CHECK(margins[1] == doctest::Approx(7.0 - 2.0).epsilon(1e-12));
  CHECK(min_margin(spec, x) > 0.0);
}

TEST_CASE("box projection clamps coordinatewise") {
  const StrategySet box = StrategySet::box({0.0, 0.0}, {1.0, 1.0});
  const Vec z = box.project({1.5, -0.2});
  CHECK(z[0] == 1.0);
  CHECK(z[1] == 0.0);
}

TEST_CASE("simplex projection fixes interior points") {
  const StrategySet simplex = StrategySet::simplex(3);
  const Vec y{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
  const Vec z = simplex.project(y);
  for (int k = 0; k < 3; ++k) CHECK(z[k] == doctest::Approx(y[k]).epsilon(1e-15));
}

TEST_CASE("simplex projection matches a brute-force grid oracle") {
  const StrategySet simplex = StrategySet::simplex(3);
  const Vec y{1.0, 0.5, 0.0};
  const Vec z = simplex.project(y);

  // Grid search over the discretized simplex at resolution 1e-3.
  const int n = 1000;
  double best = std::numeric_limits<double>::infinity();
  Vec best_z(3, 0.0);
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n - i; ++j) {
      const Vec cand{i / double(n), j / double(n), (n - i - j) / double(n)};
      const double d = dist(cand, y);
      if (d < best) {
        best = d;
        best_z = cand;
      }
    }
  }
  for (int k = 0; k < 3; ++k) CHECK(std::abs(z[k] - best_z[k]) <= 2e-3);
}

TEST_CASE("projection is non-expansive and simplex output is a distribution") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unif(-2.0, 3.0);
  const StrategySet box = StrategySet::box({0.0, -1.0, 0.5}, {1.0, 1.0, 2.0});
  const StrategySet simplex = StrategySet::simplex(4);
  for (int trial = 0; trial < 200; ++trial) {
    for (const StrategySet& s : {box, simplex}) {
      Vec y(s.dim), z(s.dim);
      for (int k = 0; k < s.dim; ++k) {
        y[k] = unif(rng);
        z[k] = unif(rng);
      }
      const Vec py = s.project(y);
      const Vec pz = s.project(z);
      CHECK(dist(py, pz) <= dist(y, z) + 1e-12);
      CHECK(s.contains(py, 1e-12));
      if (s.kind == StrategySet::Kind::Simplex) {
        double sum = 0.0;
        for (double v : py) {
          CHECK(v >= -1e-12);
          sum += v;
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("projection is idempotent") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unif(-2.0, 3.0);
  for (const StrategySet& s :
       {StrategySet::box({0.0, 0.0}, {1.0, 2.0}), StrategySet::simplex(3)}) {
    for (int trial = 0; trial < 50; ++trial) {
      Vec y(s.dim);
      for (auto& v : y) v = unif(rng);
      const Vec once = s.project(y);
      const Vec twice = s.project(once);
      CHECK(dist(once, twice) <= 1e-12);
    }
  }
}

TEST_CASE("partial_grad blocks reassemble to grad exactly") {
  const GameSpec spec = routing_game(RoutingTopology::defaults());
  StrategyProfile x;
  x.blocks = {{0.4}, {0.7}, {1.1}, {0.2}, {0.9}};
  for (const auto& fn : spec.utilities) {
    const Vec g = fn.grad(x);
    Vec rebuilt;
    for (int i = 0; i < spec.players; ++i) {
      const Vec gi = partial_grad(fn, x, i);
      rebuilt.insert(rebuilt.end(), gi.begin(), gi.end());
    }
    REQUIRE(rebuilt.size() == g.size());
    for (std::size_t k = 0; k < g.size(); ++k) CHECK(rebuilt[k] == g[k]);
  }
}

TEST_CASE("check_gradient: linear constraint is exact") {
  const GameSpec spec = routing_game(RoutingTopology::defaults());
  StrategyProfile x;
  x.blocks = {{0.4}, {0.7}, {1.1}, {0.2}, {0.9}};
  CHECK(check_gradient(spec.constraints[0].fn, x, 1e-5) <= 1e-9);
}

TEST_CASE("check_gradient: identical-interest utility") {
  const GameSpec spec = identical_interest_game(1.0, 1.0, 0.85);
  StrategyProfile x;
  x.blocks = {{0.3}, {0.4}};
  CHECK(check_gradient(spec.utilities[0], x, 1e-5) <= 1e-6);
}

TEST_CASE("check_gradient: constant function has zero error") {
  DifferentiableFn c;
  c.eval = [](const StrategyProfile&) { return 3.5; };
  c.grad = [](const StrategyProfile& p) { return Vec(p.dim(), 0.0); };
  StrategyProfile x;
  x.blocks = {{0.2}, {0.8}};
  CHECK(check_gradient(c, x, 1e-5) == 0.0);
}

TEST_CASE("upper-bound constraints round-trip the negation") {
  const GameSpec spec = routing_game(RoutingTopology::defaults());
  StrategyProfile x;
  x.blocks.assign(5, {0.5});
  const Constraint& c = spec.constraints[0];
  CHECK(c.negated);
  CHECK(c.original_threshold() == doctest::Approx(2.7).epsilon(1e-15));
  CHECK(c.original_value(x) == doctest::Approx(1.0).epsilon(1e-15));  // load on link 2
  CHECK(c.margin(x) == doctest::Approx(c.original_threshold() - c.original_value(x))
                           .epsilon(1e-15));
}

TEST_CASE("sample_mfcq: well-conditioned region reports no violations") {
  const GameSpec spec = example_region_game(2);
  MfcqDiagnostic diag;
  diag.rho = 0.01;
  diag.ell = 0.01;
  const MfcqDiagnostic out = sample_mfcq(spec, diag, 500, 100, 42);
  CHECK(out.violations.empty());
}

TEST_CASE("sample_mfcq: flags the vanishing-gradient saddle") {
  const GameSpec spec = example_region_game(1);
  MfcqDiagnostic diag;
  diag.rho = 0.01;
  diag.ell = 0.01;
  StrategyProfile saddle;
  saddle.blocks = {{0.5}, {0.5}};  // constraint gradient vanishes here
  const MfcqDiagnostic out = sample_mfcq(spec, diag, 1, 50, 42, {saddle});
  CHECK(!out.violations.empty());
}

TEST_CASE("sample_mfcq: no constraints means no violations") {
  const GameSpec spec = unconstrained_line_game();
  MfcqDiagnostic diag;
  diag.rho = 0.01;
  diag.ell = 0.01;
  CHECK(sample_mfcq(spec, diag, 10, 10, 1).violations.empty());
}

TEST_CASE("estimate_regularity brackets the declared constants") {
  const GameSpec spec = identical_interest_game(1.0, 1.0, 0.85);
  const auto [l_est, m_est] = estimate_regularity(spec, 10000, 3);
  CHECK(l_est > 0.0);
  CHECK(m_est > 0.0);
  // The declared constants bound the sampled maxima; the estimate adds x1.1.
  CHECK(l_est <= 1.1 * spec.lipschitz + 1e-9);
  CHECK(m_est <= 1.1 * spec.smoothness + 1e-9);
  CHECK(l_est >= 0.5 * spec.lipschitz);
  CHECK(m_est >= 0.5 * spec.smoothness);
}

TEST_CASE("sample_feasible respects the requested margin") {
  const GameSpec spec = identical_interest_game(1.0, 1.0, 0.85);
  const StrategyProfile x = sample_feasible(spec, 5, 0.05);
  CHECK(min_margin(spec, x) > 0.05);
  for (int i = 0; i < spec.players; ++i)
    CHECK(spec.strategy_sets[i].contains(x.blocks[i], 1e-12));
}

TEST_CASE("GameSpec::validate rejects malformed specs") {
  GameSpec spec = unconstrained_line_game();
  spec.lipschitz = 0.0;
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
  spec = unconstrained_line_game();
  spec.players = 2;
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
}

}  // namespace
}  // namespace congame
