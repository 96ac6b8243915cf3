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

#ifndef CONGAME_BARRIER_HPP
#define CONGAME_BARRIER_HPP

#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "congame/game.hpp"

namespace congame {

enum class StepsizeRule { Appendix, MainText, Fixed };

struct BarrierConfig {
  double eta = 1e-2;
  double epsilon = 1e-2;
  long max_iters = 20000;
  StepsizeRule stepsize_rule = StepsizeRule::Appendix;
  double fixed_gamma = 0.0;  // used by StepsizeRule::Fixed
  long record_every = 1;
  long nash_gap_every = 0;  // 0 = only at the best iterate, after the run
  bool verify = false;      // debug assertions (segment feasibility, monotonicity)
  // Optional evaluator returning per-player Nash gaps; wired in by callers
  // that want periodic gap evaluation and gap-based best-iterate selection.
  std::function<Vec(const GameSpec&, const StrategyProfile&)> gap_evaluator;
};

struct TrajectoryRecord {
  long iter = 0;
  StrategyProfile x;
  double phi_eta = 0.0;  // regularized potential, NaN if no potential
  double phi = 0.0;      // unregularized potential, NaN if no potential
  double beta = 0.0;     // min feasibility margin at x
  double gamma = 0.0;    // stepsize used for the outgoing step
  Vec grad_norms;        // per-player ||grad_i B_i^eta||
  double step_norm = 0.0;  // ||x^{t+1} - x^t||
  std::optional<Vec> nash_gaps;
};

enum class Termination { IterationCap, NashGapTarget, StepsizeUnderflow };

struct SolveResult {
  std::vector<TrajectoryRecord> trajectory;
  StrategyProfile best_iterate;
  double best_criterion = 0.0;
  long best_record_index = -1;
  Termination termination = Termination::IterationCap;
  long iterations = 0;
};

// B_i^eta(x) = u_i(x) + eta * sum_j log(c_j(x) - alpha_j).
double barrier_value(const GameSpec& spec, const StrategyProfile& x, double eta, int player);
Vec barrier_values(const GameSpec& spec, const StrategyProfile& x, double eta);

// grad_i B_i^eta(x) = grad_i u_i(x) + eta * sum_j grad_i c_j(x) / (c_j(x) - alpha_j).
Vec barrier_partial_grad(const GameSpec& spec, const StrategyProfile& x, double eta, int player);

// Phi^eta and its full gradient (requires spec.potential).
double regularized_potential(const GameSpec& spec, const StrategyProfile& x, double eta);
Vec regularized_potential_grad(const GameSpec& spec, const StrategyProfile& x, double eta);

// M_Phi^{eta,beta} = M sqrt(m) + eta M b / beta + eta L^2 b / beta^2.
double hessian_norm_bound(const GameSpec& spec, double eta, double beta);

// Adaptive stepsize. Appendix rule: min{beta^2 / (2 m L^2 (beta + eta b)),
// 1 / M_Phi^{eta,beta/2}}; main-text rule replaces the first argument with
// beta / (2 m L^2). With b = 0 the first argument is +infinity, recovering
// gamma = 1 / (M sqrt(m)).
double adaptive_stepsize(const GameSpec& spec, double eta, double beta,
                         StepsizeRule rule, double fixed_gamma = 0.0);

// One simultaneous projected barrier-ascent step from snapshot x.
StrategyProfile step(const GameSpec& spec, const StrategyProfile& x, double eta, double gamma);

SolveResult solve(const GameSpec& spec, const BarrierConfig& config, const StrategyProfile& x0);

// Trajectory CSV: header t,x_1..x_D,phi,phi_eta,beta,gamma,step_norm,
// nash_gap_1..nash_gap_m; 17 significant digits, '\n' line endings; nash-gap
// cells empty when not evaluated.
void write_trajectory_csv(std::ostream& os, const GameSpec& spec,
                          const std::vector<TrajectoryRecord>& trajectory);

}  // namespace congame

#endif  // CONGAME_BARRIER_HPP
