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

#include "congame/barrier.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <string>
#include <limits>
#include <ostream>
#include <sstream>

namespace congame {

namespace {

constexpr double kUnderflowGamma = 1e-14;

void require_strict(const Vec& margins, const char* who) {
  for (double m : margins)
    if (!(m > 0.0)) throw NonStrictlyFeasible(std::string(who) + ": margin <= 0");
}

// eta * sum_j grad c_j(x) / margin_j, over all joint coordinates. Summed in
// constraint order so per-player slices match barrier_partial_grad bit for bit.
Vec barrier_grad_flat(const GameSpec& spec, const StrategyProfile& x, double eta,
                      const Vec& margins) {
  Vec g(spec.dim(), 0.0);
  if (eta == 0.0) return g;
  for (std::size_t j = 0; j < spec.constraints.size(); ++j) {
    const double w = eta / margins[j];
    const Vec gc = spec.constraints[j].fn.grad(x);
    for (std::size_t k = 0; k < g.size(); ++k) g[k] += w * gc[k];
  }
  return g;
}

}  // namespace

double barrier_value(const GameSpec& spec, const StrategyProfile& x, double eta, int player) {
  const Vec margins = feasibility_margins(spec, x);
  if (eta != 0.0) require_strict(margins, "barrier_value");
  double v = spec.utilities[player].eval(x);
  if (eta != 0.0)
    for (double m : margins) v += eta * std::log(m);
  return v;
}

Vec barrier_values(const GameSpec& spec, const StrategyProfile& x, double eta) {
  Vec out(spec.players);
  for (int i = 0; i < spec.players; ++i) out[i] = barrier_value(spec, x, eta, i);
  return out;
}

Vec barrier_partial_grad(const GameSpec& spec, const StrategyProfile& x, double eta, int player) {
  const Vec margins = feasibility_margins(spec, x);
  if (eta != 0.0) require_strict(margins, "barrier_partial_grad");
  Vec g = partial_grad(spec.utilities[player], x, player);
  if (eta == 0.0 || spec.constraints.empty()) return g;

  std::size_t off = 0;
  for (int i = 0; i < player; ++i) off += x.blocks[i].size();
  Vec barrier(g.size(), 0.0);
  for (std::size_t j = 0; j < spec.constraints.size(); ++j) {
    const double w = eta / margins[j];
    const Vec gc = spec.constraints[j].fn.grad(x);
    for (std::size_t k = 0; k < g.size(); ++k) barrier[k] += w * gc[off + k];
  }
  for (std::size_t k = 0; k < g.size(); ++k) g[k] = g[k] + barrier[k];
  return g;
}

double regularized_potential(const GameSpec& spec, const StrategyProfile& x, double eta) {
  if (!spec.potential) throw std::invalid_argument("regularized_potential: no potential");
  const Vec margins = feasibility_margins(spec, x);
  if (eta != 0.0) require_strict(margins, "regularized_potential");
  double v = spec.potential->eval(x);
  if (eta != 0.0)
    for (double m : margins) v += eta * std::log(m);
  return v;
}

Vec regularized_potential_grad(const GameSpec& spec, const StrategyProfile& x, double eta) {
  if (!spec.potential) throw std::invalid_argument("regularized_potential_grad: no potential");
  const Vec margins = feasibility_margins(spec, x);
  if (eta != 0.0) require_strict(margins, "regularized_potential_grad");
  Vec g = spec.potential->grad(x);
  const Vec barrier = barrier_grad_flat(spec, x, eta, margins);
  for (std::size_t k = 0; k < g.size(); ++k) g[k] = g[k] + barrier[k];
  return g;
}

double hessian_norm_bound(const GameSpec& spec, double eta, double beta) {
  if (!(beta > 0.0)) throw std::invalid_argument("hessian_norm_bound: beta must be positive");
  const double m = static_cast<double>(spec.players);
  const double b = static_cast<double>(spec.constraints.size());
  const double M = spec.smoothness;
  const double L = spec.lipschitz;
  double bound = M * std::sqrt(m);
  if (b > 0.0 && eta != 0.0 && std::isfinite(beta))
    bound += eta * M * b / beta + eta * L * L * b / (beta * beta);
  return bound;
}

double adaptive_stepsize(const GameSpec& spec, double eta, double beta,
                         StepsizeRule rule, double fixed_gamma) {
  if (rule == StepsizeRule::Fixed) return fixed_gamma;
  if (!(beta > 0.0)) throw std::invalid_argument("adaptive_stepsize: beta must be positive");
  const double m = static_cast<double>(spec.players);
  const double L = spec.lipschitz;
  const double b = static_cast<double>(spec.constraints.size());
  double first = std::numeric_limits<double>::infinity();
  if (b > 0.0 && std::isfinite(beta)) {
    first = (rule == StepsizeRule::Appendix)
                ? beta * beta / (2.0 * m * L * L * (beta + eta * b))
                : beta / (2.0 * m * L * L);
  }
  const double second = 1.0 / hessian_norm_bound(spec, eta, beta / 2.0);
  return std::min(first, second);
}

namespace {

struct StepOutcome {
  StrategyProfile next;
  Vec grad_norms;
};

StepOutcome step_impl(const GameSpec& spec, const StrategyProfile& x, double eta,
                      double gamma, const Vec& margins) {
  const Vec barrier = barrier_grad_flat(spec, x, eta, margins);
  StepOutcome out;
  out.next.blocks.resize(spec.players);
  out.grad_norms.resize(spec.players);
  std::vector<std::size_t> offsets(spec.players, 0);
  for (int i = 1; i < spec.players; ++i)
    offsets[i] = offsets[i - 1] + x.blocks[i - 1].size();

  // Players update simultaneously from the same snapshot; blocks are written
  // into player-index slots so the result is identical to sequential order.
#pragma omp parallel for schedule(static) if (spec.players >= 16)
  for (int i = 0; i < spec.players; ++i) {
    Vec g = partial_grad(spec.utilities[i], x, i);
    const std::size_t off = offsets[i];
    for (std::size_t k = 0; k < g.size(); ++k) g[k] = g[k] + barrier[off + k];
    out.grad_norms[i] = norm(g);
    out.next.blocks[i] = spec.strategy_sets[i].project(axpy(x.blocks[i], gamma, g));
  }
  return out;
}

}  // namespace

StrategyProfile step(const GameSpec& spec, const StrategyProfile& x, double eta, double gamma) {
  const Vec margins = feasibility_margins(spec, x);
  require_strict(margins, "step");
  return step_impl(spec, x, eta, gamma, margins).next;
}

namespace {

double maybe_potential(const GameSpec& spec, const StrategyProfile& x, double eta) {
  if (!spec.potential) return std::numeric_limits<double>::quiet_NaN();
  return regularized_potential(spec, x, eta);
}

void verify_step(const GameSpec& spec, const BarrierConfig& cfg,
                 const StrategyProfile& x, const StrategyProfile& next,
                 double beta, double gamma, double step_norm, long t) {
  // Segment feasibility: with the appendix stepsize every point on the
  // segment keeps at least half the margin; other rules only preserve
  // strict feasibility of the endpoints.
  const double floor_margin =
      (cfg.stepsize_rule == StepsizeRule::Appendix && std::isfinite(beta))
          ? beta / 2.0 - 1e-12
          : 0.0;
  const Vec a = x.flat();
  const Vec b = next.flat();
  const std::vector<int> dims = spec.block_dims();
  for (int s = 0; s <= 10; ++s) {
    const double tau = s / 10.0;
    Vec mid(a);
    for (std::size_t k = 0; k < mid.size(); ++k) mid[k] += tau * (b[k] - a[k]);
    const double mm = min_margin(spec, StrategyProfile::from_flat(mid, dims));
    if (mm < floor_margin)
      throw std::runtime_error("verify: segment margin " + std::to_string(mm) +
                               " below floor at iteration " + std::to_string(t));
  }
  if (spec.potential) {
    const double before = regularized_potential(spec, x, cfg.eta);
    const double after = regularized_potential(spec, next, cfg.eta);
    if (after < before - 1e-10)
      throw std::runtime_error("verify: regularized potential decreased at iteration " +
                               std::to_string(t));
    if (gamma > 0.0 && std::isfinite(beta) &&
        1.0 / gamma >= hessian_norm_bound(spec, cfg.eta, beta / 2.0) * (1.0 - 1e-12)) {
      const double required = 0.5 * gamma * step_norm * step_norm * (1.0 - 1e-6);
      if (after - before < required - 1e-12)
        throw std::runtime_error("verify: sufficient increase violated at iteration " +
                                 std::to_string(t));
    }
  }
}

}  // namespace

SolveResult solve(const GameSpec& spec, const BarrierConfig& config, const StrategyProfile& x0) {
  const Vec margins0 = feasibility_margins(spec, x0);
  for (double m : margins0)
    if (!(m > 0.0)) throw InfeasibleStart("solve: x0 is not strictly feasible");
  if (!spec.potential)
    std::cerr << "congame: warning: no potential supplied; convergence unguaranteed\n";
  if (min_margin(spec, x0) < config.eta)
    std::cerr << "congame: warning: initial margin below eta\n";

  SolveResult result;
  const long record_every = std::max<long>(1, config.record_every);
  const bool gaps_on = config.nash_gap_every > 0 && static_cast<bool>(config.gap_evaluator);

  StrategyProfile x = x0;
  double best_surrogate = std::numeric_limits<double>::infinity();
  double best_gap = std::numeric_limits<double>::infinity();
  result.termination = Termination::IterationCap;

  auto make_record = [&](long t, const StrategyProfile& xt, double beta, double gamma,
                         const Vec& grad_norms, double step_norm) {
    TrajectoryRecord rec;
    rec.iter = t;
    rec.x = xt;
    rec.beta = beta;
    rec.gamma = gamma;
    rec.grad_norms = grad_norms;
    rec.step_norm = step_norm;
    rec.phi_eta = maybe_potential(spec, xt, config.eta);
    rec.phi = spec.potential ? spec.potential->eval(xt)
                             : std::numeric_limits<double>::quiet_NaN();
    return rec;
  };

  auto consider_best = [&](const TrajectoryRecord& rec, long index) {
    if (gaps_on) {
      if (rec.nash_gaps) {
        const double g = *std::max_element(rec.nash_gaps->begin(), rec.nash_gaps->end());
        if (g < best_gap) {
          best_gap = g;
          result.best_iterate = rec.x;
          result.best_criterion = g;
          result.best_record_index = index;
        }
      }
    } else if (rec.gamma > 0.0) {
      const double s = rec.step_norm / rec.gamma;
      if (s < best_surrogate) {
        best_surrogate = s;
        result.best_iterate = rec.x;
        result.best_criterion = s;
        result.best_record_index = index;
      }
    }
  };

  long t = 0;
  bool stopped_early = false;
  for (; t < config.max_iters; ++t) {
    const Vec margins = feasibility_margins(spec, x);
    const double beta = spec.constraints.empty()
                            ? std::numeric_limits<double>::infinity()
                            : *std::min_element(margins.begin(), margins.end());
    const double gamma = adaptive_stepsize(spec, config.eta, beta, config.stepsize_rule,
                                           config.fixed_gamma);
    if (gamma < kUnderflowGamma) {
      TrajectoryRecord rec = make_record(t, x, beta, gamma, Vec(spec.players, 0.0), 0.0);
      result.trajectory.push_back(std::move(rec));
      consider_best(result.trajectory.back(), static_cast<long>(result.trajectory.size()) - 1);
      result.termination = Termination::StepsizeUnderflow;
      stopped_early = true;
      break;
    }

    StepOutcome out = step_impl(spec, x, config.eta, gamma, margins);
    const double step_norm = dist(x.flat(), out.next.flat());

    if (config.verify) verify_step(spec, config, x, out.next, beta, gamma, step_norm, t);

    const bool gap_due = gaps_on && (t % config.nash_gap_every == 0);
    if (t % record_every == 0 || gap_due) {
      TrajectoryRecord rec = make_record(t, x, beta, gamma, out.grad_norms, step_norm);
      if (gap_due) rec.nash_gaps = config.gap_evaluator(spec, x);
      result.trajectory.push_back(std::move(rec));
      consider_best(result.trajectory.back(), static_cast<long>(result.trajectory.size()) - 1);
      if (gap_due) {
        const auto& gaps = *result.trajectory.back().nash_gaps;
        if (*std::max_element(gaps.begin(), gaps.end()) <= config.epsilon) {
          result.termination = Termination::NashGapTarget;
          stopped_early = true;
          x = out.next;
          ++t;
          break;
        }
      }
    }
    x = out.next;
  }

  if (!stopped_early || result.termination == Termination::NashGapTarget) {
    // Final record, with a hypothetical outgoing step so the stationarity
    // surrogate is defined for the last iterate too.
    const Vec margins = feasibility_margins(spec, x);
    const double beta = spec.constraints.empty()
                            ? std::numeric_limits<double>::infinity()
                            : *std::min_element(margins.begin(), margins.end());
    double gamma = 0.0, step_norm = 0.0;
    Vec grad_norms(spec.players, 0.0);
    bool strictly_feasible = true;
    for (double m : margins) strictly_feasible = strictly_feasible && m > 0.0;
    if (strictly_feasible) {
      gamma = adaptive_stepsize(spec, config.eta, beta, config.stepsize_rule,
                                config.fixed_gamma);
      if (gamma >= kUnderflowGamma) {
        StepOutcome out = step_impl(spec, x, config.eta, gamma, margins);
        step_norm = dist(x.flat(), out.next.flat());
        grad_norms = out.grad_norms;
      }
    }
    TrajectoryRecord rec = make_record(t, x, beta, gamma, grad_norms, step_norm);
    if (gaps_on) rec.nash_gaps = config.gap_evaluator(spec, x);
    result.trajectory.push_back(std::move(rec));
    consider_best(result.trajectory.back(), static_cast<long>(result.trajectory.size()) - 1);
  }

  result.iterations = t;
  if (result.best_record_index < 0) {
    // Degenerate runs (T = 0, immediate underflow): fall back to the first record.
    result.best_record_index = 0;
    result.best_iterate = result.trajectory.front().x;
    result.best_criterion = std::numeric_limits<double>::quiet_NaN();
  }
  return result;
}

namespace {

void append_num(std::string& line, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  line += buf;
}

}  // namespace

void write_trajectory_csv(std::ostream& os, const GameSpec& spec,
                          const std::vector<TrajectoryRecord>& trajectory) {
  std::string header = "t";
  for (int k = 1; k <= spec.dim(); ++k) header += ",x_" + std::to_string(k);
  header += ",phi,phi_eta,beta,gamma,step_norm";
  for (int i = 1; i <= spec.players; ++i) header += ",nash_gap_" + std::to_string(i);
  os << header << "\n";

  for (const auto& rec : trajectory) {
    std::string line = std::to_string(rec.iter);
    for (double v : rec.x.flat()) {
      line += ',';
      append_num(line, v);
    }
    for (double v : {rec.phi, rec.phi_eta, rec.beta, rec.gamma, rec.step_norm}) {
      line += ',';
      append_num(line, v);
    }
    for (int i = 0; i < spec.players; ++i) {
      line += ',';
      if (rec.nash_gaps) append_num(line, (*rec.nash_gaps)[i]);
    }
    os << line << "\n";
  }
}

}  // namespace congame
