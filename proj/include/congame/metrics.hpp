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

#ifndef CONGAME_METRICS_HPP
#define CONGAME_METRICS_HPP

#include <functional>
#include <string>
#include <vector>

#include "congame/barrier.hpp"
#include "congame/game.hpp"

namespace congame {

struct InnerSolverStatus {
  long iterations = 0;
  double final_surrogate = 0.0;
  bool stalled = false;
};

struct NashGapReport {
  Vec per_player_gap;      // clamped at 0 for presentation
  Vec raw_gap;             // unclamped, for diagnostics
  double max_gap = 0.0;
  std::vector<Vec> per_player_argmax;  // best response found
  std::vector<InnerSolverStatus> status;
};

// Restriction of the game to player i with the other blocks frozen at x.
// The slice utility is its own potential (single-player identical interest).
GameSpec slice_game(const GameSpec& spec, const StrategyProfile& x, int player);

// Nash-Gap_i(x) = max over feasible deviations of u_i(x_i', x_-i) - u_i(x).
// Each inner problem is solved by single-player log-barrier ascent with a
// decreasing eta schedule (tol * 2^-k, 3 rounds).
NashGapReport nash_gap(const GameSpec& spec, const StrategyProfile& x, double tol);

bool is_epsilon_nash(const GameSpec& spec, const StrategyProfile& x, double eps, double tol);

struct KktCertificate {
  Vec lambda;                 // lambda_j = (eta/2) / margin_j
  double primal_violation = 0.0;  // max_j [alpha_j - c_j(x)]_+
  double comp_slack = 0.0;        // max_j |lambda_j * margin_j|
  double stationarity = 0.0;      // max over players
  Vec per_player_stationarity;
};

KktCertificate kkt_certificate(const GameSpec& spec, const StrategyProfile& x, double eta);

struct KktNashReport {
  double eps_hat = 0.0;  // max(comp_slack, max stationarity)
  double max_gap = 0.0;
  bool holds = false;    // max_gap <= 2 * eps_hat + tol
  KktCertificate certificate;
  NashGapReport gaps;
};

KktNashReport kkt_implies_nash_check(const GameSpec& spec, const StrategyProfile& x,
                                     double eta, double tol);

// max over x' in the set of <x' - x, g>, in closed form (coordinatewise for
// boxes, vertex selection for simplices).
double linear_max_over_set(const StrategySet& set, const Vec& x, const Vec& g);

// Line-oriented key=value serialization consumed by the CLI reports.
std::string to_key_value(const NashGapReport& report);
std::string to_key_value(const KktCertificate& cert);

// Adapter for BarrierConfig::gap_evaluator.
std::function<Vec(const GameSpec&, const StrategyProfile&)> make_gap_evaluator(double tol);

}  // namespace congame

#endif  // CONGAME_METRICS_HPP
