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

#include "congame/games.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <memory>
#include <random>
#include <string>

namespace congame {

double Polynomial::eval(double x) const {
  double v = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) v = v * x + *it;
  return v;
}

double Polynomial::deriv(double x) const {
  double v = 0.0;
  for (std::size_t k = coeffs.size(); k-- > 1;) v = v * x + coeffs[k] * static_cast<double>(k);
  return v;
}

double Polynomial::deriv2(double x) const {
  double v = 0.0;
  for (std::size_t k = coeffs.size(); k-- > 2;)
    v = v * x + coeffs[k] * static_cast<double>(k) * static_cast<double>(k - 1);
  return v;
}

long FinitePotentialGame::joint_actions() const {
  long n = 1;
  for (int c : action_counts) n *= c;
  return n;
}

long FinitePotentialGame::index(const std::vector<int>& action) const {
  long idx = 0;
  for (int i = 0; i < players(); ++i) idx = idx * action_counts[i] + action[i];
  return idx;
}

void FinitePotentialGame::validate(double tol) const {
  if (players() == 0) throw std::invalid_argument("FinitePotentialGame: no players");
  for (int c : action_counts)
    if (c < 1) throw std::invalid_argument("FinitePotentialGame: empty action set");
  const long total = joint_actions();
  if (static_cast<long>(potential.size()) != total ||
      static_cast<int>(utilities.size()) != players())
    throw std::invalid_argument("FinitePotentialGame: table size mismatch");
  for (const auto& u : utilities)
    if (static_cast<long>(u.size()) != total)
      throw std::invalid_argument("FinitePotentialGame: table size mismatch");

  std::vector<int> a(players(), 0);
  for (long idx = 0; idx < total; ++idx) {
    for (int i = 0; i < players(); ++i) {
      std::vector<int> dev = a;
      for (int alt = 0; alt < action_counts[i]; ++alt) {
        dev[i] = alt;
        const long jdx = index(dev);
        const double lhs = potential[idx] - potential[jdx];
        const double rhs = utilities[i][idx] - utilities[i][jdx];
        if (std::abs(lhs - rhs) > tol)
          throw PotentialIdentityFailed("finite potential identity fails at joint action " +
                                        std::to_string(idx));
      }
    }
    for (int i = players() - 1; i >= 0; --i) {
      if (++a[i] < action_counts[i]) break;
      a[i] = 0;
    }
  }
}

namespace {

std::string expect_keyword(std::istream& in, const char* kw) {
  std::string tok;
  if (!(in >> tok) || tok != kw)
    throw std::runtime_error(std::string("expected keyword '") + kw + "', got '" + tok + "'");
  return tok;
}

}  // namespace

FinitePotentialGame FinitePotentialGame::load(std::istream& in) {
  FinitePotentialGame fin;
  int m = 0;
  expect_keyword(in, "players");
  if (!(in >> m) || m < 1) throw std::runtime_error("bad player count");
  expect_keyword(in, "actions");
  fin.action_counts.resize(m);
  for (int& c : fin.action_counts)
    if (!(in >> c) || c < 1) throw std::runtime_error("bad action count");
  const long total = fin.joint_actions();
  expect_keyword(in, "utilities");
  fin.utilities.assign(m, Vec(total));
  for (auto& table : fin.utilities)
    for (double& v : table)
      if (!(in >> v)) throw std::runtime_error("truncated utility table");
  expect_keyword(in, "potential");
  fin.potential.resize(total);
  for (double& v : fin.potential)
    if (!(in >> v)) throw std::runtime_error("truncated potential table");
  fin.validate();
  return fin;
}

FinitePotentialGame FinitePotentialGame::random(const std::vector<int>& action_counts,
                                                std::uint64_t seed) {
  FinitePotentialGame fin;
  fin.action_counts = action_counts;
  const int m = fin.players();
  const long total = fin.joint_actions();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 0.5);

  fin.potential.resize(total);
  for (double& v : fin.potential) v = unif(rng);

  // u_i(a) = phi(a) + w_i(a_-i): the dummy term cancels in every unilateral
  // deviation, so the potential identity holds by construction.
  fin.utilities.assign(m, Vec(total));
  for (int i = 0; i < m; ++i) {
    long others = 1;
    for (int j = 0; j < m; ++j)
      if (j != i) others *= action_counts[j];
    Vec w(others);
    for (double& v : w) v = unif(rng);

    std::vector<int> a(m, 0);
    for (long idx = 0; idx < total; ++idx) {
      long widx = 0;
      for (int j = 0; j < m; ++j)
        if (j != i) widx = widx * action_counts[j] + a[j];
      fin.utilities[i][idx] = fin.potential[idx] + w[widx];
      for (int j = m - 1; j >= 0; --j) {
        if (++a[j] < action_counts[j]) break;
        a[j] = 0;
      }
    }
  }
  return fin;
}

void RoutingTopology::validate() const {
  if (players() < 1 || links() < 1) throw std::invalid_argument("routing: empty topology");
  for (const auto& row : incidence) {
    if (static_cast<int>(row.size()) != links())
      throw std::invalid_argument("routing: incidence row size mismatch");
    if (std::none_of(row.begin(), row.end(), [](bool b) { return b; }))
      throw std::invalid_argument("routing: player uses no link");
  }
  for (const auto& [k, cap] : caps) {
    if (k < 0 || k >= links()) throw std::invalid_argument("routing: cap on unknown link");
    bool used = false;
    for (const auto& row : incidence) used = used || row[k];
    if (!used) throw std::invalid_argument("routing: capped link unused");
    if (!(cap > 0)) throw std::invalid_argument("routing: nonpositive capacity");
  }
  if (!(flow_upper > 0)) throw std::invalid_argument("routing: nonpositive flow bound");
}

RoutingTopology RoutingTopology::defaults() {
  RoutingTopology t;
  t.incidence = {
      {true, true, true, false, false},
      {false, true, false, true, true},
      {false, false, false, true, true},
      {false, false, false, true, true},
      {false, false, false, true, true},
  };
  t.link_costs = {
      {{0.0, 1.0, 5.0}},
      {{1.0, 2.0, 4.0}},
      {{0.0, 0.0, 5.0}},
      {{0.0, 1.0, 2.0}},
      {{0.0, 10.0}},
  };
  t.profit = 42.0;
  t.caps = {{1, 2.7}, {4, 7.0}};
  t.flow_upper = 10.0;
  return t;
}

RoutingTopology RoutingTopology::load(std::istream& in) {
  RoutingTopology t;
  int m = 0, n = 0;
  expect_keyword(in, "players");
  if (!(in >> m) || m < 1) throw std::runtime_error("bad player count");
  expect_keyword(in, "links");
  if (!(in >> n) || n < 1) throw std::runtime_error("bad link count");
  expect_keyword(in, "profit");
  if (!(in >> t.profit)) throw std::runtime_error("bad profit");
  expect_keyword(in, "flow_upper");
  if (!(in >> t.flow_upper)) throw std::runtime_error("bad flow bound");
  expect_keyword(in, "incidence");
  t.incidence.assign(m, std::vector<bool>(n, false));
  for (auto& row : t.incidence)
    for (int k = 0; k < n; ++k) {
      int b;
      if (!(in >> b) || (b != 0 && b != 1)) throw std::runtime_error("bad incidence entry");
      row[k] = b == 1;
    }
  expect_keyword(in, "costs");
  t.link_costs.resize(n);
  for (auto& poly : t.link_costs) {
    int count;
    if (!(in >> count) || count < 1) throw std::runtime_error("bad coefficient count");
    poly.coeffs.resize(count);
    for (double& c : poly.coeffs)
      if (!(in >> c)) throw std::runtime_error("bad coefficient");
  }
  expect_keyword(in, "caps");
  int ncaps;
  if (!(in >> ncaps) || ncaps < 0) throw std::runtime_error("bad cap count");
  for (int j = 0; j < ncaps; ++j) {
    int link;
    double cap;
    if (!(in >> link >> cap)) throw std::runtime_error("bad cap entry");
    t.caps.emplace_back(link - 1, cap);
  }
  t.validate();
  return t;
}

namespace {

DifferentiableFn make_fn(std::function<double(const StrategyProfile&)> eval,
                         std::function<Vec(const StrategyProfile&)> grad) {
  DifferentiableFn f;
  f.eval = std::move(eval);
  f.grad = std::move(grad);
  return f;
}

}  // namespace

GameSpec identical_interest_game(double a, double b, double alpha) {
  if (!(a > 0) || !(b > 0)) throw std::invalid_argument("identical_interest_game: a, b > 0");
  if (!(alpha > 0) || alpha > 1.0)
    throw std::invalid_argument("identical_interest_game: alpha in (0, 1]");

  auto u_eval = [a, b](const StrategyProfile& p) {
    const double x1 = p.blocks[0][0], x2 = p.blocks[1][0];
    return (x1 + x2) - a * (x1 - x2) * (x1 - x2) - b * (x1 * x1 + x2 * x2);
  };
  auto u_grad = [a, b](const StrategyProfile& p) {
    const double x1 = p.blocks[0][0], x2 = p.blocks[1][0];
    return Vec{1.0 - 2.0 * a * (x1 - x2) - 2.0 * b * x1,
               1.0 + 2.0 * a * (x1 - x2) - 2.0 * b * x2};
  };
  DifferentiableFn u = make_fn(u_eval, u_grad);

  DifferentiableFn c = make_fn(
      [](const StrategyProfile& p) { return 1.0 - p.blocks[0][0] * p.blocks[1][0]; },
      [](const StrategyProfile& p) { return Vec{-p.blocks[1][0], -p.blocks[0][0]}; });

  GameSpec spec;
  spec.players = 2;
  spec.strategy_sets = {StrategySet::box({0.0}, {1.0}), StrategySet::box({0.0}, {1.0})};
  spec.utilities = {u, u};
  spec.constraints = {Constraint::lower_bound(c, alpha)};

  // The utility gradient is affine, so its norm peaks at a box corner; the
  // constraint gradient norm peaks at (1,1).
  double lmax = std::sqrt(2.0);
  for (int c1 = 0; c1 <= 1; ++c1)
    for (int c2 = 0; c2 <= 1; ++c2) {
      StrategyProfile corner;
      corner.blocks = {{double(c1)}, {double(c2)}};
      lmax = std::max(lmax, norm(u_grad(corner)));
    }
  spec.lipschitz = lmax;
  spec.smoothness = std::max(4.0 * a + 2.0 * b, 1.0);
  spec.is_potential = true;
  spec.potential = u;
  spec.name = "identical-interest";
  spec.validate();
  return spec;
}

namespace {

Vec link_loads(const RoutingTopology& t, const StrategyProfile& p) {
  Vec loads(t.links(), 0.0);
  for (int i = 0; i < t.players(); ++i)
    for (int k = 0; k < t.links(); ++k)
      if (t.incidence[i][k]) loads[k] += p.blocks[i][0];
  return loads;
}

StrategyProfile sample_routing_feasible(const RoutingTopology& t, const Vec& xmax,
                                        const std::vector<Constraint>& constraints,
                                        std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int attempt = 0; attempt < 100000; ++attempt) {
    StrategyProfile p;
    p.blocks.resize(t.players());
    for (int i = 0; i < t.players(); ++i) p.blocks[i] = {unif(rng) * xmax[i]};
    bool ok = true;
    for (const auto& c : constraints) ok = ok && c.margin(p) >= 0.0;
    if (ok) return p;
  }
  throw std::runtime_error("routing: feasible sampling failed");
}

}  // namespace

GameSpec routing_game(const RoutingTopology& topology) {
  topology.validate();
  auto t = std::make_shared<RoutingTopology>(topology);
  const int m = t->players();
  const int n = t->links();

  GameSpec spec;
  spec.players = m;
  for (int i = 0; i < m; ++i)
    spec.strategy_sets.push_back(StrategySet::box({0.0}, {t->flow_upper}));

  for (int i = 0; i < m; ++i) {
    auto eval = [t, i](const StrategyProfile& p) {
      const Vec loads = link_loads(*t, p);
      double v = t->profit * p.blocks[i][0];
      for (int k = 0; k < t->links(); ++k)
        if (t->incidence[i][k]) v -= t->link_costs[k].eval(loads[k]);
      return v;
    };
    auto grad = [t, i, m](const StrategyProfile& p) {
      const Vec loads = link_loads(*t, p);
      Vec g(m, 0.0);
      g[i] = t->profit;
      for (int k = 0; k < t->links(); ++k) {
        if (!t->incidence[i][k]) continue;
        const double dp = t->link_costs[k].deriv(loads[k]);
        for (int j = 0; j < m; ++j)
          if (t->incidence[j][k]) g[j] -= dp;
      }
      return g;
    };
    spec.utilities.push_back(make_fn(eval, grad));
  }

  for (const auto& [k, cap] : t->caps) {
    const int link = k;
    auto eval = [t, link](const StrategyProfile& p) { return link_loads(*t, p)[link]; };
    auto grad = [t, link, m](const StrategyProfile& p) {
      (void)p;
      Vec g(m, 0.0);
      for (int i = 0; i < m; ++i)
        if (t->incidence[i][link]) g[i] = 1.0;
      return g;
    };
    spec.constraints.push_back(Constraint::upper_bound(make_fn(eval, grad), cap));
  }

  // Per-player flow bound tightened by the caps it shares, then per-link
  // load bounds, feeding conservative L and M estimates over the feasible box.
  Vec xmax(m, t->flow_upper);
  for (int i = 0; i < m; ++i)
    for (const auto& [k, cap] : t->caps)
      if (t->incidence[i][k]) xmax[i] = std::min(xmax[i], cap);
  Vec loadmax(n, 0.0);
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < m; ++i)
      if (t->incidence[i][k]) loadmax[k] += xmax[i];
    // A link whose users all ride some capped link carries at most that cap.
    for (const auto& [ck, cap] : t->caps) {
      bool subset = true;
      for (int i = 0; i < m; ++i)
        if (t->incidence[i][k] && !t->incidence[i][ck]) subset = false;
      if (subset) loadmax[k] = std::min(loadmax[k], cap);
    }
  }
  Vec d2max(n);
  for (int k = 0; k < n; ++k)
    d2max[k] = std::max(std::abs(t->link_costs[k].deriv2(0.0)),
                        std::abs(t->link_costs[k].deriv2(loadmax[k])));
  double lmax = 0.0, mmax = 0.0;
  for (int i = 0; i < m; ++i) {
    double g2 = 0.0, rowmax = 0.0;
    for (int j = 0; j < m; ++j) {
      // Each gradient entry p 1{i=j} - sum_k P_k'(load_k) is monotone in the
      // loads, so its extremes sit at the all-zero and all-max load corners.
      double at_zero = i == j ? t->profit : 0.0;
      double at_max = at_zero;
      for (int k = 0; k < n; ++k)
        if (t->incidence[i][k] && t->incidence[j][k]) {
          at_zero -= t->link_costs[k].deriv(0.0);
          at_max -= t->link_costs[k].deriv(loadmax[k]);
        }
      const double gj = std::max(std::abs(at_zero), std::abs(at_max));
      g2 += gj * gj;
      double row = 0.0;
      for (int l = 0; l < m; ++l) {
        double h = 0.0;
        for (int k = 0; k < n; ++k)
          if (t->incidence[i][k] && t->incidence[j][k] && t->incidence[l][k]) h += d2max[k];
        row += h;
      }
      rowmax = std::max(rowmax, row);
    }
    lmax = std::max(lmax, std::sqrt(g2));
    mmax = std::max(mmax, rowmax);
  }
  for (int k = 0; k < n; ++k) {
    int users = 0;
    for (int i = 0; i < m; ++i) users += t->incidence[i][k] ? 1 : 0;
    lmax = std::max(lmax, std::sqrt(static_cast<double>(users)));
  }
  spec.lipschitz = lmax;
  spec.smoothness = std::max(mmax, 1.0);

  DifferentiableFn phi = make_fn(
      [t](const StrategyProfile& p) {
        const Vec loads = link_loads(*t, p);
        double v = 0.0;
        for (int i = 0; i < t->players(); ++i) v += t->profit * p.blocks[i][0];
        for (int k = 0; k < t->links(); ++k) v -= t->link_costs[k].eval(loads[k]);
        return v;
      },
      [t, m](const StrategyProfile& p) {
        const Vec loads = link_loads(*t, p);
        Vec g(m, t->profit);
        for (int k = 0; k < t->links(); ++k) {
          const double dp = t->link_costs[k].deriv(loads[k]);
          for (int i = 0; i < m; ++i)
            if (t->incidence[i][k]) g[i] -= dp;
        }
        return g;
      });
  spec.is_potential = true;
  spec.potential = phi;
  spec.name = "routing";

  std::mt19937_64 rng(0x20260823ULL);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    StrategyProfile x = sample_routing_feasible(*t, xmax, spec.constraints, rng);
    const int i = static_cast<int>(rng() % static_cast<std::uint64_t>(m));
    StrategyProfile y = x;
    for (int attempt = 0;; ++attempt) {
      if (attempt >= 100000) throw std::runtime_error("routing: deviation sampling failed");
      y.blocks[i] = {unif(rng) * xmax[i]};
      bool ok = true;
      for (const auto& c : spec.constraints) ok = ok && c.margin(y) >= 0.0;
      if (ok) break;
    }
    const double dphi = phi.eval(y) - phi.eval(x);
    const double du = spec.utilities[i].eval(y) - spec.utilities[i].eval(x);
    if (std::abs(dphi - du) > 1e-8)
      throw PotentialIdentityFailed("routing potential identity fails: |dphi - du| = " +
                                    std::to_string(std::abs(dphi - du)));
  }

  spec.validate();
  return spec;
}

GameSpec mixed_extension(const FinitePotentialGame& fin) {
  fin.validate();
  const long total = fin.joint_actions();
  if (total > 1000000) throw std::invalid_argument("mixed_extension: joint action space too large");
  auto f = std::make_shared<FinitePotentialGame>(fin);
  const int m = f->players();

  auto expectation = [f, m, total](const Vec& table, const StrategyProfile& p) {
    std::vector<int> a(m, 0);
    double v = 0.0;
    for (long idx = 0; idx < total; ++idx) {
      double prob = 1.0;
      for (int j = 0; j < m; ++j) prob *= p.blocks[j][a[j]];
      v += prob * table[idx];
      for (int j = m - 1; j >= 0; --j) {
        if (++a[j] < f->action_counts[j]) break;
        a[j] = 0;
      }
    }
    return v;
  };
  auto expectation_grad = [f, m, total](const Vec& table, const StrategyProfile& p) {
    std::vector<int> offsets(m, 0);
    int dim = 0;
    for (int j = 0; j < m; ++j) {
      offsets[j] = dim;
      dim += f->action_counts[j];
    }
    Vec g(dim, 0.0);
    std::vector<int> a(m, 0);
    for (long idx = 0; idx < total; ++idx) {
      for (int i = 0; i < m; ++i) {
        double prob = 1.0;
        for (int j = 0; j < m; ++j)
          if (j != i) prob *= p.blocks[j][a[j]];
        g[offsets[i] + a[i]] += prob * table[idx];
      }
      for (int j = m - 1; j >= 0; --j) {
        if (++a[j] < f->action_counts[j]) break;
        a[j] = 0;
      }
    }
    return g;
  };

  GameSpec spec;
  spec.players = m;
  for (int j = 0; j < m; ++j) spec.strategy_sets.push_back(StrategySet::simplex(f->action_counts[j]));
  for (int i = 0; i < m; ++i) {
    spec.utilities.push_back(make_fn(
        [expectation, f, i](const StrategyProfile& p) { return expectation(f->utilities[i], p); },
        [expectation_grad, f, i](const StrategyProfile& p) {
          return expectation_grad(f->utilities[i], p);
        }));
  }

  double umax = 0.0;
  for (const auto& table : f->utilities)
    for (double v : table) umax = std::max(umax, std::abs(v));
  for (double v : f->potential) umax = std::max(umax, std::abs(v));
  int dim = 0;
  for (int c : f->action_counts) dim += c;
  spec.lipschitz = std::sqrt(static_cast<double>(dim)) * std::max(umax, 1.0);
  spec.smoothness = std::max(1.0, static_cast<double>(m - 1) * umax);

  spec.is_potential = true;
  spec.potential = make_fn(
      [expectation, f](const StrategyProfile& p) { return expectation(f->potential, p); },
      [expectation_grad, f](const StrategyProfile& p) {
        return expectation_grad(f->potential, p);
      });
  spec.name = "mixed-extension";
  spec.validate();
  return spec;
}

namespace {

// (x_1 - 1/2)(x_2 - 1/2) shifted by `offset`, optionally negated.
Constraint bilinear_constraint(double offset, bool negate) {
  const double s = negate ? -1.0 : 1.0;
  DifferentiableFn f = make_fn(
      [offset, s](const StrategyProfile& p) {
        return s * ((p.blocks[0][0] - 0.5) * (p.blocks[1][0] - 0.5) - offset);
      },
      [s](const StrategyProfile& p) {
        return Vec{s * (p.blocks[1][0] - 0.5), s * (p.blocks[0][0] - 0.5)};
      });
  return Constraint::lower_bound(f, 0.0);
}

}  // namespace

std::vector<Constraint> example_region(int which) {
  if (which == 1) return {bilinear_constraint(0.0, false)};
  if (which == 2)
    return {bilinear_constraint(1.0 / 111.0, false), bilinear_constraint(1.0 / 11.0, true)};
  throw std::invalid_argument("example_region: which must be 1 or 2");
}

GameSpec example_region_game(int which) {
  GameSpec spec;
  spec.players = 2;
  spec.strategy_sets = {StrategySet::box({0.0}, {1.0}), StrategySet::box({0.0}, {1.0})};
  if (which == 1) {
    DifferentiableFn u = make_fn(
        [](const StrategyProfile& p) { return p.blocks[0][0] * (1.0 - p.blocks[1][0]); },
        [](const StrategyProfile& p) {
          return Vec{1.0 - p.blocks[1][0], -p.blocks[0][0]};
        });
    spec.utilities = {u, u};
    spec.is_potential = true;
    spec.potential = u;
  } else if (which == 2) {
    DifferentiableFn zero = make_fn([](const StrategyProfile&) { return 0.0; },
                                    [](const StrategyProfile&) { return Vec{0.0, 0.0}; });
    spec.utilities = {zero, zero};
    spec.is_potential = true;
    spec.potential = zero;
  } else {
    throw std::invalid_argument("example_region_game: which must be 1 or 2");
  }
  spec.constraints = example_region(which);
  spec.lipschitz = std::sqrt(2.0);
  spec.smoothness = 1.0;
  spec.name = which == 1 ? "example-1" : "example-2";
  spec.validate();
  return spec;
}

std::vector<Constraint> non_concave_ring_region() {
  auto r2 = [](const StrategyProfile& p) {
    const double dx = p.blocks[0][0] - 0.5, dy = p.blocks[1][0] - 0.5;
    return dx * dx + dy * dy;
  };
  auto r2_grad = [](const StrategyProfile& p) {
    return Vec{2.0 * (p.blocks[0][0] - 0.5), 2.0 * (p.blocks[1][0] - 0.5)};
  };
  DifferentiableFn inner = make_fn([r2](const StrategyProfile& p) { return r2(p) - 0.04; },
                                   r2_grad);
  DifferentiableFn outer = make_fn([r2](const StrategyProfile& p) { return 0.16 - r2(p); },
                                   [r2_grad](const StrategyProfile& p) {
                                     Vec g = r2_grad(p);
                                     for (double& v : g) v = -v;
                                     return g;
                                   });
  return {Constraint::lower_bound(inner, 0.0), Constraint::lower_bound(outer, 0.0)};
}

}  // namespace congame
