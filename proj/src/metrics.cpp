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

#include "congame/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <sstream>

namespace congame {

namespace {

constexpr long kInnerStageCap = 200000;
constexpr long kPlateauWindow = 4000;

double set_diameter(const StrategySet& s) {
  if (s.kind == StrategySet::Kind::Simplex) return std::sqrt(2.0);
  double d2 = 0.0;
  for (int k = 0; k < s.dim; ++k) {
    const double d = s.upper[k] - s.lower[k];
    d2 += d * d;
  }
  return std::sqrt(d2);
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

GameSpec slice_game(const GameSpec& spec, const StrategyProfile& x, int player) {
  auto frozen = std::make_shared<StrategyProfile>(x);
  auto embed = [frozen, player](const StrategyProfile& p) {
    StrategyProfile full = *frozen;
    full.blocks[player] = p.blocks[0];
    return full;
  };
  auto wrap = [embed, player](const DifferentiableFn& f) {
    DifferentiableFn out;
    out.eval = [embed, f](const StrategyProfile& p) { return f.eval(embed(p)); };
    out.grad = [embed, f, player](const StrategyProfile& p) {
      return partial_grad(f, embed(p), player);
    };
    return out;
  };

  GameSpec slice;
  slice.players = 1;
  slice.strategy_sets = {spec.strategy_sets[player]};
  slice.utilities = {wrap(spec.utilities[player])};
  for (const auto& c : spec.constraints) {
    Constraint sc;
    sc.fn = wrap(c.fn);
    sc.threshold = c.threshold;
    sc.negated = c.negated;
    slice.constraints.push_back(std::move(sc));
  }
  slice.lipschitz = spec.lipschitz;
  slice.smoothness = spec.smoothness;
  slice.is_potential = true;
  slice.potential = slice.utilities[0];
  slice.name = spec.name + "-slice";
  return slice;
}

namespace {

struct InnerResult {
  Vec best_point;
  double best_value;
  InnerSolverStatus status;
};

// Maximizes the slice utility by projected log-barrier ascent with a
// decreasing eta schedule; tracks the best true utility value seen.
InnerResult solve_slice(const GameSpec& slice, const Vec& start, double tol) {
  InnerResult res;
  StrategyProfile y;
  y.blocks = {start};
  res.best_point = start;
  res.best_value = slice.utilities[0].eval(y);
  res.status.stalled = false;

  const double diam = std::max(set_diameter(slice.strategy_sets[0]), 1e-12);
  const double surrogate_target = 0.25 * tol / diam;

  for (int stage = 0; stage < 3; ++stage) {
    const double eta = tol * std::pow(2.0, -stage);
    bool reached = false;
    double checkpoint_value = res.best_value;
    for (long it = 0; it < kInnerStageCap; ++it) {
      // The slice is concave, so once the best value plateaus the remaining
      // suboptimality is a small fraction of the window improvement.
      if (it > 0 && it % kPlateauWindow == 0) {
        if (res.best_value - checkpoint_value < 0.02 * tol) {
          reached = true;
          break;
        }
        checkpoint_value = res.best_value;
      }
      const double beta = min_margin(slice, y);
      if (!(beta > 0.0)) {
        res.status.stalled = true;
        return res;
      }
      const double gamma = adaptive_stepsize(slice, eta, beta, StepsizeRule::Appendix);
      if (gamma < 1e-14) {
        res.status.stalled = true;
        return res;
      }
      StrategyProfile next = step(slice, y, eta, gamma);
      const double moved = dist(y.blocks[0], next.blocks[0]);
      ++res.status.iterations;
      y = std::move(next);
      const double val = slice.utilities[0].eval(y);
      if (val > res.best_value) {
        res.best_value = val;
        res.best_point = y.blocks[0];
      }
      res.status.final_surrogate = moved / gamma;
      if (res.status.final_surrogate <= surrogate_target) {
        reached = true;
        break;
      }
    }
    if (stage == 2 && !reached) res.status.stalled = true;
  }
  return res;
}

}  // namespace

NashGapReport nash_gap(const GameSpec& spec, const StrategyProfile& x, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("nash_gap: tol must be positive");
  if (min_margin(spec, x) < -1e-12)
    throw InfeasibleProfile("nash_gap: profile violates the coupling constraints");

  NashGapReport report;
  report.per_player_gap.resize(spec.players);
  report.raw_gap.resize(spec.players);
  report.per_player_argmax.resize(spec.players);
  report.status.resize(spec.players);

#pragma omp parallel for schedule(dynamic) if (spec.players > 1)
  for (int i = 0; i < spec.players; ++i) {
    const GameSpec slice = slice_game(spec, x, i);
    StrategyProfile xi;
    xi.blocks = {x.blocks[i]};
    const double base = slice.utilities[0].eval(xi);
    InnerResult inner = solve_slice(slice, x.blocks[i], tol);
    report.raw_gap[i] = inner.best_value - base;
    report.per_player_gap[i] = std::max(0.0, report.raw_gap[i]);
    report.per_player_argmax[i] = inner.best_point;
    report.status[i] = inner.status;
  }
  report.max_gap =
      *std::max_element(report.per_player_gap.begin(), report.per_player_gap.end());
  return report;
}

bool is_epsilon_nash(const GameSpec& spec, const StrategyProfile& x, double eps, double tol) {
  if (min_margin(spec, x) < -1e-12) return false;
  for (int i = 0; i < spec.players; ++i)
    if (!spec.strategy_sets[i].contains(x.blocks[i], 1e-9)) return false;
  return nash_gap(spec, x, tol).max_gap <= eps + tol;
}

double linear_max_over_set(const StrategySet& set, const Vec& x, const Vec& g) {
  if (set.kind == StrategySet::Kind::Box) {
    double total = 0.0;
    for (int k = 0; k < set.dim; ++k)
      total += std::max(g[k] * (set.lower[k] - x[k]), g[k] * (set.upper[k] - x[k]));
    return total;
  }
  return *std::max_element(g.begin(), g.end()) - dot(g, x);
}

KktCertificate kkt_certificate(const GameSpec& spec, const StrategyProfile& x, double eta) {
  const Vec margins = feasibility_margins(spec, x);
  for (double m : margins)
    if (!(m > 0.0)) throw NonStrictlyFeasible("kkt_certificate: margin <= 0");

  KktCertificate cert;
  cert.lambda.resize(margins.size());
  cert.primal_violation = 0.0;
  cert.comp_slack = 0.0;
  for (std::size_t j = 0; j < margins.size(); ++j) {
    cert.lambda[j] = (eta / 2.0) / margins[j];
    cert.primal_violation = std::max(cert.primal_violation, -margins[j]);
    cert.comp_slack = std::max(cert.comp_slack, std::abs(cert.lambda[j] * margins[j]));
  }
  cert.primal_violation = std::max(cert.primal_violation, 0.0);

  cert.per_player_stationarity.resize(spec.players);
  for (int i = 0; i < spec.players; ++i) {
    Vec g = partial_grad(spec.utilities[i], x, i);
    for (std::size_t j = 0; j < spec.constraints.size(); ++j) {
      const Vec gc = partial_grad(spec.constraints[j].fn, x, i);
      for (std::size_t k = 0; k < g.size(); ++k) g[k] += cert.lambda[j] * gc[k];
    }
    cert.per_player_stationarity[i] =
        linear_max_over_set(spec.strategy_sets[i], x.blocks[i], g);
  }
  cert.stationarity = spec.players == 0 ? 0.0
                                        : *std::max_element(cert.per_player_stationarity.begin(),
                                                            cert.per_player_stationarity.end());
  return cert;
}

KktNashReport kkt_implies_nash_check(const GameSpec& spec, const StrategyProfile& x,
                                     double eta, double tol) {
  KktNashReport report;
  report.certificate = kkt_certificate(spec, x, eta);
  report.eps_hat = std::max(report.certificate.comp_slack, report.certificate.stationarity);
  report.gaps = nash_gap(spec, x, tol);
  report.max_gap = report.gaps.max_gap;
  report.holds = report.max_gap <= 2.0 * report.eps_hat + tol;
  return report;
}

std::string to_key_value(const NashGapReport& report) {
  std::ostringstream os;
  os << "max_gap=" << fmt(report.max_gap) << "\n";
  for (std::size_t i = 0; i < report.per_player_gap.size(); ++i) {
    os << "gap_" << (i + 1) << "=" << fmt(report.per_player_gap[i]) << "\n";
    os << "raw_gap_" << (i + 1) << "=" << fmt(report.raw_gap[i]) << "\n";
    os << "inner_iterations_" << (i + 1) << "=" << report.status[i].iterations << "\n";
    os << "inner_surrogate_" << (i + 1) << "=" << fmt(report.status[i].final_surrogate) << "\n";
    os << "inner_stalled_" << (i + 1) << "=" << (report.status[i].stalled ? 1 : 0) << "\n";
  }
  return os.str();
}

std::string to_key_value(const KktCertificate& cert) {
  std::ostringstream os;
  for (std::size_t j = 0; j < cert.lambda.size(); ++j)
    os << "lambda_" << (j + 1) << "=" << fmt(cert.lambda[j]) << "\n";
  os << "primal_violation=" << fmt(cert.primal_violation) << "\n";
  os << "comp_slack=" << fmt(cert.comp_slack) << "\n";
  os << "stationarity=" << fmt(cert.stationarity) << "\n";
  for (std::size_t i = 0; i < cert.per_player_stationarity.size(); ++i)
    os << "stationarity_" << (i + 1) << "=" << fmt(cert.per_player_stationarity[i]) << "\n";
  return os.str();
}

std::function<Vec(const GameSpec&, const StrategyProfile&)> make_gap_evaluator(double tol) {
  return [tol](const GameSpec& spec, const StrategyProfile& x) {
    return nash_gap(spec, x, tol).per_player_gap;
  };
}

}  // namespace congame
