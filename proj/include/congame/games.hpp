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

#ifndef CONGAME_GAMES_HPP
#define CONGAME_GAMES_HPP

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "congame/game.hpp"

namespace congame {

// Univariate polynomial, coefficients lowest degree first.
struct Polynomial {
  Vec coeffs;

  double eval(double x) const;
  double deriv(double x) const;
  double deriv2(double x) const;
};

struct PotentialIdentityFailed : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Finite game with an exact potential; payoffs indexed by joint action in
// lexicographic order (last player's action varies fastest).
struct FinitePotentialGame {
  std::vector<int> action_counts;
  std::vector<Vec> utilities;  // one flat table per player
  Vec potential;

  int players() const { return static_cast<int>(action_counts.size()); }
  long joint_actions() const;
  long index(const std::vector<int>& action) const;

  // Exhaustive deviation identity phi(a) - phi(a_i', a_-i) =
  // u_i(a) - u_i(a_i', a_-i); throws PotentialIdentityFailed beyond tol.
  void validate(double tol = 1e-12) const;

  // Text format: "players m", "actions n_1 .. n_m", "utilities" followed by
  // m flat tables, "potential" followed by one flat table.
  static FinitePotentialGame load(std::istream& in);

  // Random instance built as u_i(a) = phi(a) + w_i(a_-i).
  static FinitePotentialGame random(const std::vector<int>& action_counts,
                                    std::uint64_t seed);
};

struct RoutingTopology {
  std::vector<std::vector<bool>> incidence;  // player x link
  std::vector<Polynomial> link_costs;
  double profit = 0.0;
  std::vector<std::pair<int, double>> caps;  // (link index, capacity)
  double flow_upper = 10.0;                  // per-player box [0, flow_upper]

  int players() const { return static_cast<int>(incidence.size()); }
  int links() const { return static_cast<int>(link_costs.size()); }
  void validate() const;

  // Five players, five links, costs P_1(x) = 5x^2 + x, P_2 = 4x^2 + 2x + 1,
  // P_3 = 5x^2, P_4 = 2x^2 + x, P_5 = 10x, profit 42, caps 2.7 on link 2 and
  // 7 on link 5. The path-link incidence is a plain data table users can
  // replace; potential verification at construction guards any edit.
  static RoutingTopology defaults();

  // Text format: "players m", "links n", "profit p", "flow_upper u",
  // "incidence" + m rows of 0/1, "costs" + n coefficient lines (count then
  // coefficients lowest degree first), "caps" + "k link cap" pairs.
  static RoutingTopology load(std::istream& in);
};

// Two players on [0,1], u = (x_1 + x_2) - a (x_1 - x_2)^2 - b (x_1^2 + x_2^2),
// shared constraint 1 - x_1 x_2 >= alpha.
GameSpec identical_interest_game(double a, double b, double alpha);

// Five players routing flow x_i in [0, flow_upper] over their links;
// u_i = p x_i - sum_{k in R_i} P_k(load_k) with capacity caps on shared links.
// The congestion potential is verified on 1000 random feasible deviation
// pairs; construction throws PotentialIdentityFailed if any exceeds 1e-8.
GameSpec routing_game(const RoutingTopology& topology);

// Mixed extension over simplices: u_i(x) = E_{a ~ x}[u_i(a)], potential
// E_{a ~ x}[phi(a)], multilinear closed-form gradients. Joint action space
// capped at 1e6 terms.
GameSpec mixed_extension(const FinitePotentialGame& fin);

// Feasible-region fixtures on [0,1]^2.
// which = 1: {(x_1 - 1/2)(x_2 - 1/2) >= 0}
// which = 2: {(x_1 - 1/2)(x_2 - 1/2) - 1/111 >= 0,
//             1/11 - (x_1 - 1/2)(x_2 - 1/2) >= 0}
std::vector<Constraint> example_region(int which);

// Region fixtures wrapped as 2-player games: which = 1 uses
// u_1 = u_2 = x_1 (1 - x_2); which = 2 has zero utilities.
GameSpec example_region_game(int which);

// Annulus 0.04 <= (x_1 - 1/2)^2 + (x_2 - 1/2)^2 <= 0.16 on [0,1]^2. The
// inner constraint is playerwise convex, so slices of the (connected) region
// are non-contiguous; used to exercise violation detection.
std::vector<Constraint> non_concave_ring_region();

}  // namespace congame

#endif  // CONGAME_GAMES_HPP
