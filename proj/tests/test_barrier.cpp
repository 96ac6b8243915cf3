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
#include <random>
#include <sstream>

#include "congame/barrier.hpp"
#include "congame/games.hpp"
#include "doctest.h"

namespace congame {
namespace {

GameSpec toy_constrained_game() {
  // One player on [0,1], u = x, constraint x + 1 >= 0 with margin 1 at x = 0.
  GameSpec spec;
  spec.players = 1;
  spec.strategy_sets = {StrategySet::box({0.0}, {1.0})};
  DifferentiableFn u;
  u.eval = [](const StrategyProfile& p) { return p.blocks[0][0]; };
  u.grad = [](const StrategyProfile&) { return Vec{1.0}; };
  DifferentiableFn c;
  c.eval = [](const StrategyProfile& p) { return p.blocks[0][0] + 1.0; };
  c.grad = [](const StrategyProfile&) { return Vec{1.0}; };
  spec.utilities = {u};
  spec.constraints = {Constraint::lower_bound(c, 0.0)};
  spec.lipschitz = 1.0;
  spec.smoothness = 1.0;
  spec.is_potential = true;
  spec.potential = u;
  spec.name = "toy";
  return spec;
}

GameSpec concave_bump_game() {
  // One player on [0,1], u = -(x - 0.5)^2, interior maximizer at 0.5.
  GameSpec spec;
  spec.players = 1;
  spec.strategy_sets = {StrategySet::box({0.0}, {1.0})};
  DifferentiableFn u;
  u.eval = [](const StrategyProfile& p) {
    const double d = p.blocks[0][0] - 0.5;
    return -d * d;
  };
  u.grad = [](const StrategyProfile& p) { return Vec{-2.0 * (p.blocks[0][0] - 0.5)}; };
  spec.utilities = {u};
  spec.lipschitz = 1.0;
  spec.smoothness = 2.0;
  spec.is_potential = true;
  spec.potential = u;
  spec.name = "bump";
  return spec;
}

// Constants-only spec for the stepsize and Hessian-bound formulas.
GameSpec formula_spec(int players, int constraints, double L, double M) {
  GameSpec spec;
  spec.players = players;
  DifferentiableFn zero;
  zero.eval = [](const StrategyProfile&) { return 0.0; };
  zero.grad = [](const StrategyProfile& p) { return Vec(p.dim(), 0.0); };
  for (int i = 0; i < players; ++i) {
    spec.strategy_sets.push_back(StrategySet::box({0.0}, {1.0}));
    spec.utilities.push_back(zero);
  }
  for (int j = 0; j < constraints; ++j)
    spec.constraints.push_back(Constraint::lower_bound(zero, -1.0));
  spec.lipschitz = L;
  spec.smoothness = M;
  return spec;
}

TEST_CASE("barrier_value: closed-form check at the origin") {
  const GameSpec spec = identical_interest_game(1.0, 1.0, 0.85);
  StrategyProfile x;
  x.blocks = {{0.0}, {0.0}};
  // u(0,0) = 0, margin 0.15, so B = 0.1 * ln(0.15).
  const double expected = 0.1 * std::log(0.15);
  CHECK(barrier_value(spec, x, 0.1, 0) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(expected == doctest::Approx(-0.18971).epsilon(1e-4));
  const Vec both = barrier_values(spec, x, 0.1);
  CHECK(both[0] == both[1]);  // identical interest
}

TEST_CASE("barrier_value: eta = 0 recovers the utility") {
  const GameSpec spec = identical_interest_game(1.0, 1.0, 0.85);
  StrategyProfile x;
  x.blocks = {{0.2}, {0.3}};
  CHECK(barrier_value(spec, x, 0.0, 0) ==
        doctest::Approx(spec.utilities[0].eval(x)).epsilon(1e-15));
}

TEST_CASE("barrier_value: unit margin contributes nothing") {
  const GameSpec spec = toy_constrained_game();
  StrategyProfile x;
  x.blocks = {{0.0}};  // margin exactly 1
  CHECK(barrier_value(spec, x, 0.7, 0) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("barrier_value: throws on non-strictly-feasible input") {
  const GameSpec spec = identical_interest_game(1.0, 1.0, 0.85);
  StrategyProfile x;
  x.blocks = {{1.0}, {1.0}};  // margin 0.15 - 1 < 0
  CHECK_THROWS_AS(barrier_value(spec, x, 0.1, 0), NonStrictlyFeasible);
}

TEST_CASE("barrier_partial_grad matches central differences of barrier_value") {
  const GameSpec spec = identical_interest_game(1.0, 1.0, 0.85);
  StrategyProfile x;
  x.blocks = {{0.2}, {0.2}};
  const double eta = 0.05, h = 1e-6;
  for (int i = 0; i < 2; ++i) {
    const Vec g = barrier_partial_grad(spec, x, eta, i);
    REQUIRE(g.size() == 1);
    StrategyProfile xp = x, xm = x;
    xp.blocks[i][0] += h;
    xm.blocks[i][0] -= h;
    const double fd =
        (barrier_value(spec, xp, eta, i) - barrier_value(spec, xm, eta, i)) / (2.0 * h);
    CHECK(std::abs(fd - g[0]) / (1.0 + std::abs(g[0])) <= 1e-6);
  }
}

TEST_CASE("barrier_partial_grad: no constraints reduces to the utility gradient") {
  const GameSpec spec = concave_bump_game();
  StrategyProfile x;
  x.blocks = {{0.3}};
  const Vec g = barrier_partial_grad(spec, x, 0.1, 0);
  const Vec gu = partial_grad(spec.utilities[0], x, 0);
  CHECK(g[0] == gu[0]);
}

TEST_CASE("barrier_partial_grad: constraint terms follow the incidence columns") {
  const GameSpec spec = routing_game(RoutingTopology::defaults());
  StrategyProfile x;
  x.blocks.assign(5, {0.5});
  const double eta = 0.1;
  const Vec margins = feasibility_margins(spec, x);
  // Player 3 (index 2) rides only link 5 (constraint 2); player 1 (index 0)
  // rides only link 2 (constraint 1). Each barrier term is -eta / margin.
  for (int i : {0, 2}) {
    const Vec g = barrier_partial_grad(spec, x, eta, i);
    const Vec gu = partial_grad(spec.utilities[i], x, i);
    const double expected = i == 0 ? -eta / margins[0] : -eta / margins[1];
    CHECK(g[0] - gu[0] == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("hessian_norm_bound formula") {
  const GameSpec spec = formula_spec(2, 1, 1.0, 1.0);
  CHECK(hessian_norm_bound(spec, 0.0, 1.0) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  // M sqrt(m) + eta M b / beta + eta L^2 b / beta^2 at eta 0.1, beta 0.5.
  CHECK(hessian_norm_bound(spec, 0.1, 0.5) ==
        doctest::Approx(std::sqrt(2.0) + 0.2 + 0.4).epsilon(1e-15));
  CHECK(hessian_norm_bound(spec, 0.1, 0.5) == doctest::Approx(2.01421).epsilon(1e-5));
  // Monotone decrease towards M sqrt(m) as beta grows.
  double prev = hessian_norm_bound(spec, 0.1, 0.25);
  for (double beta : {0.5, 1.0, 10.0, 1e6}) {
    const double cur = hessian_norm_bound(spec, 0.1, beta);
    CHECK(cur <= prev + 1e-15);
    CHECK(cur >= std::sqrt(2.0));
    prev = cur;
  }
  CHECK(hessian_norm_bound(spec, 0.1, 1e9) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-8));
  CHECK_THROWS_AS(hessian_norm_bound(spec, 0.1, 0.0), std::invalid_argument);
}

TEST_CASE("adaptive_stepsize formulas") {
  const GameSpec spec = formula_spec(2, 1, 1.0, 1.0);
  // First argument 0.25 / (2*2*1*0.6) ~ 0.10417, second ~ 0.29266.
  const double gamma = adaptive_stepsize(spec, 0.1, 0.5, StepsizeRule::Appendix);
  CHECK(gamma == doctest::Approx(0.25 / 2.4).epsilon(1e-15));
  CHECK(gamma == doctest::Approx(0.10417).epsilon(1e-4));
  const double second = 1.0 / hessian_norm_bound(spec, 0.1, 0.25);
  CHECK(second == doctest::Approx(1.0 / (std::sqrt(2.0) + 2.0)).epsilon(1e-12));
  // Main-text variant replaces the first argument with beta / (2 m L^2).
  CHECK(adaptive_stepsize(spec, 0.1, 0.5, StepsizeRule::MainText) ==
        doctest::Approx(0.125).epsilon(1e-15));
  CHECK_THROWS_AS(adaptive_stepsize(spec, 0.1, -1.0, StepsizeRule::Appendix),
                  std::invalid_argument);
}

TEST_CASE("adaptive_stepsize: unconstrained games get 1 / (M sqrt(m))") {
  const GameSpec spec = formula_spec(4, 0, 1.0, 3.0);
  const double gamma =
      adaptive_stepsize(spec, 0.0, std::numeric_limits<double>::infinity(),
                        StepsizeRule::Appendix);
  CHECK(gamma == doctest::Approx(1.0 / (3.0 * 2.0)).epsilon(1e-15));
}

TEST_CASE("adaptive_stepsize: fixed rule overrides") {
  const GameSpec spec = formula_spec(2, 1, 1.0, 1.0);
  CHECK(adaptive_stepsize(spec, 0.1, 0.5, StepsizeRule::Fixed, 0.037) == 0.037);
}

TEST_CASE("step: zero stepsize leaves the profile unchanged") {
  const GameSpec spec = identical_interest_game(1.0, 1.0, 0.85);
  StrategyProfile x;
  x.blocks = {{0.2}, {0.3}};
  CHECK(step(spec, x, 0.1, 0.0) == x);
}

TEST_CASE("step: interior stationary point is fixed") {
  const GameSpec spec = concave_bump_game();
  StrategyProfile x;
  x.blocks = {{0.5}};
  CHECK(step(spec, x, 0.0, 0.25) == x);
}

TEST_CASE("step: appendix stepsize keeps the whole segment half-margin feasible") {
  const GameSpec spec = identical_interest_game(1.0, 1.0, 0.85);
  StrategyProfile x;
  x.blocks = {{0.0}, {0.0}};
  const double eta = 0.1;
  const double beta = min_margin(spec, x);
  const double gamma = adaptive_stepsize(spec, eta, beta, StepsizeRule::Appendix);
  const StrategyProfile next = step(spec, x, eta, gamma);
  for (int s = 0; s <= 10; ++s) {
    const double tau = s / 10.0;
    StrategyProfile mid;
    mid.blocks = {{(1 - tau) * x.blocks[0][0] + tau * next.blocks[0][0]},
                  {(1 - tau) * x.blocks[1][0] + tau * next.blocks[1][0]}};
    CHECK(min_margin(spec, mid) >= beta / 2.0 - 1e-12);
  }
}

TEST_CASE("step: simultaneous update is bit-identical to per-player sequential") {
  const GameSpec spec = routing_game(RoutingTopology::defaults());
  StrategyProfile x;
  x.blocks = {{0.4}, {0.6}, {0.8}, {1.0}, {1.2}};
  const double eta = 0.01, gamma = 1e-3;
  const StrategyProfile next = step(spec, x, eta, gamma);
  for (int i = 0; i < spec.players; ++i) {
    const Vec g = barrier_partial_grad(spec, x, eta, i);
    const Vec expected = spec.strategy_sets[i].project(axpy(x.blocks[i], gamma, g));
    REQUIRE(expected.size() == next.blocks[i].size());
    for (std::size_t k = 0; k < expected.size(); ++k)
      CHECK(next.blocks[i][k] == expected[k]);
  }
}

TEST_CASE("solve: T = 0 records only the start point") {
  const GameSpec spec = identical_interest_game(1.0, 1.0, 0.85);
  StrategyProfile x0;
  x0.blocks = {{0.1}, {0.1}};
  BarrierConfig config;
  config.max_iters = 0;
  const SolveResult result = solve(spec, config, x0);
  REQUIRE(result.trajectory.size() == 1);
  CHECK(result.trajectory[0].x == x0);
  CHECK(result.best_iterate == x0);
  CHECK(result.iterations == 0);
  CHECK(result.termination == Termination::IterationCap);
}

TEST_CASE("solve: rejects an infeasible start") {
  const GameSpec spec = identical_interest_game(1.0, 1.0, 0.85);
  StrategyProfile x0;
  x0.blocks = {{1.0}, {1.0}};
  BarrierConfig config;
  CHECK_THROWS_AS(solve(spec, config, x0), InfeasibleStart);
}

TEST_CASE("solve: feasible monotone trajectory with verify mode on") {
  const GameSpec spec = identical_interest_game(1.0, 1.0, 0.85);
  StrategyProfile x0;
  x0.blocks = {{0.1}, {0.1}};
  BarrierConfig config;
  config.eta = 1e-2;
  config.max_iters = 2000;
  config.record_every = 1;
  config.verify = true;  // asserts segment feasibility and sufficient increase
  const SolveResult result = solve(spec, config, x0);
  REQUIRE(result.trajectory.size() == 2001);
  double prev = -std::numeric_limits<double>::infinity();
  for (const auto& rec : result.trajectory) {
    CHECK(rec.beta > 0.0);
    CHECK(rec.phi_eta >= prev - 1e-10);
    prev = rec.phi_eta;
  }
  CHECK(result.best_record_index >= 0);
  CHECK(result.best_iterate == result.trajectory[result.best_record_index].x);
}

TEST_CASE("solve: gradient alignment with the regularized potential") {
  for (const GameSpec& spec : {identical_interest_game(1.0, 1.0, 0.85),
                               routing_game(RoutingTopology::defaults())}) {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 50; ++trial) {
      const StrategyProfile x = sample_feasible(spec, rng(), 1e-6);
      const Vec gphi = regularized_potential_grad(spec, x, 0.05);
      std::size_t off = 0;
      for (int i = 0; i < spec.players; ++i) {
        const Vec gi = barrier_partial_grad(spec, x, 0.05, i);
        for (std::size_t k = 0; k < gi.size(); ++k)
          CHECK(std::abs(gi[k] - gphi[off + k]) <= 1e-9);
        off += gi.size();
      }
    }
  }
}

TEST_CASE("trajectory CSV format and determinism") {
  const GameSpec spec = identical_interest_game(1.0, 1.0, 0.85);
  StrategyProfile x0;
  x0.blocks = {{0.1}, {0.1}};
  BarrierConfig config;
  config.max_iters = 500;
  config.record_every = 10;
  const SolveResult a = solve(spec, config, x0);
  const SolveResult b = solve(spec, config, x0);
  std::ostringstream sa, sb;
  write_trajectory_csv(sa, spec, a.trajectory);
  write_trajectory_csv(sb, spec, b.trajectory);
  CHECK(sa.str() == sb.str());
  std::istringstream head(sa.str());
  std::string header;
  std::getline(head, header);
  CHECK(header == "t,x_1,x_2,phi,phi_eta,beta,gamma,step_norm,nash_gap_1,nash_gap_2");
}

}  // namespace
}  // namespace congame
