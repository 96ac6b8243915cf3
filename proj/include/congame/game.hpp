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

#ifndef CONGAME_GAME_HPP
#define CONGAME_GAME_HPP

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "congame/vec.hpp"

namespace congame {

// Joint strategy profile x = (x_1, ..., x_m), one block per player.
struct StrategyProfile {
  std::vector<Vec> blocks;

  int players() const { return static_cast<int>(blocks.size()); }

  int dim() const {
    int d = 0;
    for (const auto& b : blocks) d += static_cast<int>(b.size());
    return d;
  }

  // Concatenation in player-index order.
  Vec flat() const;

  static StrategyProfile from_flat(const Vec& x, const std::vector<int>& block_dims);

  bool operator==(const StrategyProfile&) const = default;
};

// A differentiable real-valued function of a joint profile. `grad` returns
// the gradient over all joint coordinates in concatenation order; per-player
// blocks are obtained by slicing, so the block of `grad` equals the partial
// gradient exactly.
struct DifferentiableFn {
  std::function<double(const StrategyProfile&)> eval;
  std::function<Vec(const StrategyProfile&)> grad;
};

// grad restricted to player i's coordinate block.
Vec partial_grad(const DifferentiableFn& fn, const StrategyProfile& x, int player);

struct StrategySet {
  enum class Kind { Box, Simplex };

  Kind kind = Kind::Box;
  int dim = 0;
  Vec lower, upper;  // box bounds; unused for simplex

  static StrategySet box(Vec lo, Vec hi);
  static StrategySet simplex(int dimension);

  // Euclidean projection: coordinatewise clamping for boxes, sort-and-shift
  // for the probability simplex.
  Vec project(const Vec& y) const;

  bool contains(const Vec& v, double tol = 1e-12) const;

  // An interior point (box center / uniform distribution).
  Vec center() const;
};

// Canonical form c(x) >= alpha. Upper-bound constraints f(x) <= cap are
// stored negated: c = -f, alpha = -cap.
struct Constraint {
  DifferentiableFn fn;
  double threshold = 0.0;
  bool negated = false;  // true when entered as an upper bound

  static Constraint lower_bound(DifferentiableFn f, double alpha);
  static Constraint upper_bound(DifferentiableFn f, double cap);

  double margin(const StrategyProfile& x) const { return fn.eval(x) - threshold; }

  // Round-trips the stored negation: for an upper-bound constraint this
  // recovers the user's original function value and cap.
  double original_value(const StrategyProfile& x) const;
  double original_threshold() const;
};

struct GameSpec {
  int players = 0;
  std::vector<StrategySet> strategy_sets;
  std::vector<DifferentiableFn> utilities;
  std::vector<Constraint> constraints;
  double lipschitz = 0.0;   // L, Lipschitz bound for utilities and constraints
  double smoothness = 0.0;  // M, smoothness bound
  bool is_potential = false;
  std::optional<DifferentiableFn> potential;
  std::string name;

  int dim() const;
  std::vector<int> block_dims() const;
  void validate() const;  // structural invariants (m >= 1, L > 0, M > 0, ...)
};

struct NonStrictlyFeasible : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InfeasibleStart : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InfeasibleProfile : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Per-constraint margins c_j(x) - alpha_j.
Vec feasibility_margins(const GameSpec& spec, const StrategyProfile& x);

// min_j margin; +infinity when there are no constraints.
double min_margin(const GameSpec& spec, const StrategyProfile& x);

// Max over joint coordinates of |central difference - analytic| / (1 + |analytic|).
double check_gradient(const DifferentiableFn& fn, const StrategyProfile& x, double h);

struct MfcqDiagnostic {
  double rho = 0.0;
  double ell = 0.0;
  std::vector<std::pair<StrategyProfile, int>> violations;
};

// Samples feasible profiles; for each near-active constraint (margin <= rho)
// searches random unit directions (kept inside the strategy sets) for one with
// <delta, grad c_j> > ell. Points where no sampled direction qualifies are
// recorded. Absence of violations is evidence, not proof.
MfcqDiagnostic sample_mfcq(const GameSpec& spec, const MfcqDiagnostic& diag,
                           int samples, int directions, std::uint64_t seed,
                           const std::vector<StrategyProfile>& extra_points = {});

// Estimates L and M by sampling gradient norms and gradient differences over
// random feasible pairs; returns the observed maxima with a 1.1 safety factor.
std::pair<double, double> estimate_regularity(const GameSpec& spec, int pairs,
                                              std::uint64_t seed);

// Uniform rejection sampling of a feasible profile. Throws after too many
// rejections.
StrategyProfile sample_feasible(const GameSpec& spec, std::uint64_t seed,
                                double min_margin_required = 0.0);

}  // namespace congame

#endif  // CONGAME_GAME_HPP
