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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <memory>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "congame/barrier.hpp"
#include "congame/game.hpp"
#include "congame/games.hpp"
#include "congame/metrics.hpp"
#include "congame/region.hpp"
#include "congame/svg.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitTargetNotMet = 4;

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::filesystem::path resolve_output_dir(const std::string& flag_value) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv("CONGAME_OUTPUT_DIR"); env && *env) return env;
  return ".";
}

struct RunOptions {
  std::string config;  // optional key=value file, applied before other flags
  std::string game = "identical-interest";
  double a = 1.0, b = 1.0, alpha = 0.85;
  double eta = 1e-2, epsilon = 1e-2;
  long T = -1;  // -1 = game default
  std::string stepsize = "appendix";
  double gamma = 0.0;
  long record_every = -1;    // -1 = max(1, T / 10000)
  long nash_gap_every = -1;  // -1 = max(1, T / 50)
  std::string x0;            // comma separated; empty = game default
  std::uint64_t seed = 1;
  std::string output_dir;
  bool verify = false;
  double gap_tol = 1e-4;
};

congame::Vec parse_csv_doubles(const std::string& text) {
  congame::Vec out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    size_t pos = 0;
    out.push_back(std::stod(item, &pos));
  }
  return out;
}

std::string join_csv(const congame::Vec& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += fmt(v[i]);
  }
  return out;
}

// Loads the key=value format emitted to config.txt. Returns an empty string
// on success, otherwise a description of the offending line.
std::string load_run_config(std::istream& in, RunOptions& opt) {
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) return "missing '=' in '" + line + "'";
    const std::string key = line.substr(0, eq);
    const std::string value = line.substr(eq + 1);
    try {
      if (key == "game") opt.game = value;
      else if (key == "a") opt.a = std::stod(value);
      else if (key == "b") opt.b = std::stod(value);
      else if (key == "alpha") opt.alpha = std::stod(value);
      else if (key == "eta") opt.eta = std::stod(value);
      else if (key == "epsilon") opt.epsilon = std::stod(value);
      else if (key == "iterations" || key == "T") opt.T = std::stol(value);
      else if (key == "stepsize") opt.stepsize = value;
      else if (key == "gamma") opt.gamma = std::stod(value);
      else if (key == "record-every") opt.record_every = std::stol(value);
      else if (key == "nash-gap-every") opt.nash_gap_every = std::stol(value);
      else if (key == "x0") opt.x0 = value;
      else if (key == "seed") opt.seed = std::stoull(value);
      else if (key == "verify") opt.verify = value == "true" || value == "1";
      else if (key == "gap-tol") opt.gap_tol = std::stod(value);
      else return "unknown key '" + key + "'";
    } catch (const std::exception&) {
      return "bad value in '" + line + "'";
    }
  }
  return "";
}

int do_run(RunOptions opt) {
  congame::GameSpec spec;
  congame::StrategyProfile x0;
  long default_T = 20000;
  if (opt.game == "identical-interest") {
    spec = congame::identical_interest_game(opt.a, opt.b, opt.alpha);
    x0.blocks = {{0.1}, {0.1}};
  } else if (opt.game == "routing") {
    spec = congame::routing_game(congame::RoutingTopology::defaults());
    x0.blocks.assign(5, {0.5});
    // The routing equilibrium sits much closer to the capacity boundary, so
    // the adaptive stepsizes shrink accordingly; the default budget is larger.
    default_T = 1500000;
  } else {
    std::cerr << "unknown game '" << opt.game << "'\n";
    return kExitConfig;
  }
  if (opt.T < 0) opt.T = default_T;
  if (!opt.x0.empty()) {
    congame::Vec flat = parse_csv_doubles(opt.x0);
    if (static_cast<int>(flat.size()) != spec.dim()) {
      std::cerr << "x0 has " << flat.size() << " coordinates, expected " << spec.dim() << "\n";
      return kExitConfig;
    }
    x0 = congame::StrategyProfile::from_flat(flat, spec.block_dims());
  }
  if (opt.record_every < 0) opt.record_every = std::max(1L, opt.T / 10000);
  if (opt.nash_gap_every < 0) opt.nash_gap_every = std::max(1L, opt.T / 50);

  congame::BarrierConfig config;
  config.eta = opt.eta;
  config.epsilon = opt.epsilon;
  config.max_iters = opt.T;
  if (opt.stepsize == "appendix") {
    config.stepsize_rule = congame::StepsizeRule::Appendix;
  } else if (opt.stepsize == "main-text") {
    config.stepsize_rule = congame::StepsizeRule::MainText;
  } else if (opt.stepsize == "fixed") {
    config.stepsize_rule = congame::StepsizeRule::Fixed;
    config.fixed_gamma = opt.gamma;
    if (!(opt.gamma > 0)) {
      std::cerr << "fixed stepsize requires --gamma > 0\n";
      return kExitConfig;
    }
  } else {
    std::cerr << "unknown stepsize rule '" << opt.stepsize << "'\n";
    return kExitConfig;
  }
  config.record_every = opt.record_every;
  config.nash_gap_every = opt.nash_gap_every;
  config.verify = opt.verify;
  config.gap_evaluator = congame::make_gap_evaluator(opt.gap_tol);

  const std::filesystem::path out_dir = resolve_output_dir(opt.output_dir);
  std::filesystem::create_directories(out_dir);
  {
    std::ofstream cfg(out_dir / "config.txt");
    cfg << "game=" << opt.game << "\n";
    if (opt.game == "identical-interest")
      cfg << "a=" << fmt(opt.a) << "\nb=" << fmt(opt.b) << "\nalpha=" << fmt(opt.alpha) << "\n";
    cfg << "eta=" << fmt(opt.eta) << "\n";
    cfg << "epsilon=" << fmt(opt.epsilon) << "\n";
    cfg << "iterations=" << opt.T << "\n";
    cfg << "stepsize=" << opt.stepsize << "\n";
    if (opt.stepsize == "fixed") cfg << "gamma=" << fmt(opt.gamma) << "\n";
    cfg << "record-every=" << opt.record_every << "\n";
    cfg << "nash-gap-every=" << opt.nash_gap_every << "\n";
    cfg << "x0=" << join_csv(x0.flat()) << "\n";
    cfg << "seed=" << opt.seed << "\n";
    cfg << "verify=" << (opt.verify ? "true" : "false") << "\n";
    cfg << "gap-tol=" << fmt(opt.gap_tol) << "\n";
  }

  congame::SolveResult result;
  try {
    result = congame::solve(spec, config, x0);
  } catch (const congame::InfeasibleStart& e) {
    std::cerr << e.what() << "\n";
    return kExitInfeasible;
  } catch (const congame::NonStrictlyFeasible& e) {
    std::cerr << e.what() << "\n";
    return kExitInfeasible;
  }

  {
    std::ofstream csv(out_dir / "trajectory.csv");
    congame::write_trajectory_csv(csv, spec, result.trajectory);
  }

  const congame::NashGapReport gaps = congame::nash_gap(spec, result.best_iterate, opt.gap_tol);
  const congame::KktCertificate cert =
      congame::kkt_certificate(spec, result.best_iterate, opt.eta);
  {
    std::ofstream report(out_dir / "report.txt");
    report << "game=" << spec.name << "\n";
    report << "iterations=" << result.iterations << "\n";
    const char* term = "iteration-cap";
    if (result.termination == congame::Termination::NashGapTarget) term = "nash-gap-target";
    if (result.termination == congame::Termination::StepsizeUnderflow)
      term = "stepsize-underflow";
    report << "termination=" << term << "\n";
    report << "best_iterate=" << join_csv(result.best_iterate.flat()) << "\n";
    report << "best_criterion=" << fmt(result.best_criterion) << "\n";
    report << congame::to_key_value(gaps);
    report << congame::to_key_value(cert);
    for (std::size_t j = 0; j < spec.constraints.size(); ++j) {
      report << "constraint_" << (j + 1) << "="
             << fmt(spec.constraints[j].original_value(result.best_iterate)) << "\n";
      report << "threshold_" << (j + 1) << "="
             << fmt(spec.constraints[j].original_threshold()) << "\n";
    }
  }

  {
    std::vector<congame::LineSeries> gap_series(spec.players);
    for (int i = 0; i < spec.players; ++i)
      gap_series[i].label = "player " + std::to_string(i + 1);
    for (const auto& rec : result.trajectory) {
      if (!rec.nash_gaps) continue;
      for (int i = 0; i < spec.players; ++i) {
        gap_series[i].xs.push_back(static_cast<double>(rec.iter));
        gap_series[i].ys.push_back((*rec.nash_gaps)[i]);
      }
    }
    std::ofstream svg(out_dir / "gaps.svg");
    congame::write_line_chart(svg, spec.name + ": Nash gaps", "iteration", "Nash gap",
                              gap_series, true);
  }
  {
    std::vector<congame::LineSeries> c_series(spec.constraints.size());
    for (std::size_t j = 0; j < spec.constraints.size(); ++j)
      c_series[j].label = "constraint " + std::to_string(j + 1);
    for (const auto& rec : result.trajectory) {
      for (std::size_t j = 0; j < spec.constraints.size(); ++j) {
        c_series[j].xs.push_back(static_cast<double>(rec.iter));
        c_series[j].ys.push_back(spec.constraints[j].original_value(rec.x));
      }
    }
    std::ofstream svg(out_dir / "constraints.svg");
    congame::write_line_chart(svg, spec.name + ": constraint values", "iteration",
                              "constraint value", c_series, false);
  }

  return gaps.max_gap <= opt.epsilon + opt.gap_tol ? kExitOk : kExitTargetNotMet;
}

struct RegionOptions {
  std::string which = "example-2";
  int resolution = 400;
  std::string file;
  std::string output_dir;
};

// Custom region file: "box <x_lo> <x_hi> <y_lo> <y_hi>" then any number of
// "constraint <threshold> <rows> <cols>" blocks with a rows x cols matrix of
// coefficients c_{ij} of x^i y^j.
std::vector<congame::Constraint> load_custom_region(std::istream& in, congame::Vec& lower,
                                                    congame::Vec& upper) {
  std::string tok;
  if (!(in >> tok) || tok != "box") throw std::runtime_error("expected 'box'");
  lower.resize(2);
  upper.resize(2);
  if (!(in >> lower[0] >> upper[0] >> lower[1] >> upper[1]))
    throw std::runtime_error("bad box bounds");
  std::vector<congame::Constraint> constraints;
  while (in >> tok) {
    if (tok != "constraint") throw std::runtime_error("expected 'constraint'");
    double threshold;
    int rows, cols;
    if (!(in >> threshold >> rows >> cols) || rows < 1 || cols < 1)
      throw std::runtime_error("bad constraint header");
    auto coeffs = std::make_shared<std::vector<congame::Vec>>(rows, congame::Vec(cols));
    for (auto& row : *coeffs)
      for (double& c : row)
        if (!(in >> c)) throw std::runtime_error("bad coefficient");
    congame::DifferentiableFn f;
    f.eval = [coeffs](const congame::StrategyProfile& p) {
      const double x = p.blocks[0][0], y = p.blocks[1][0];
      double v = 0.0, xi = 1.0;
      for (const auto& row : *coeffs) {
        double yj = 1.0, acc = 0.0;
        for (double c : row) {
          acc += c * yj;
          yj *= y;
        }
        v += xi * acc;
        xi *= x;
      }
      return v;
    };
    f.grad = [coeffs](const congame::StrategyProfile& p) {
      const double x = p.blocks[0][0], y = p.blocks[1][0];
      congame::Vec g{0.0, 0.0};
      for (std::size_t i = 0; i < coeffs->size(); ++i) {
        for (std::size_t j = 0; j < (*coeffs)[i].size(); ++j) {
          const double c = (*coeffs)[i][j];
          if (i > 0) g[0] += c * i * std::pow(x, double(i - 1)) * std::pow(y, double(j));
          if (j > 0) g[1] += c * j * std::pow(x, double(i)) * std::pow(y, double(j - 1));
        }
      }
      return g;
    };
    constraints.push_back(congame::Constraint::lower_bound(f, threshold));
  }
  return constraints;
}

int do_analyze_region(const RegionOptions& opt) {
  if (opt.resolution < 2) {
    std::cerr << "resolution must be >= 2\n";
    return kExitConfig;
  }
  std::vector<congame::Constraint> constraints;
  congame::Vec lower{0.0, 0.0}, upper{1.0, 1.0};
  if (opt.which == "example-1") {
    constraints = congame::example_region(1);
  } else if (opt.which == "example-2") {
    constraints = congame::example_region(2);
  } else if (opt.which == "identical-interest") {
    constraints = congame::identical_interest_game(1.0, 1.0, 0.85).constraints;
  } else if (opt.which == "custom-file") {
    if (opt.file.empty()) {
      std::cerr << "custom-file requires --file\n";
      return kExitConfig;
    }
    std::ifstream in(opt.file);
    if (!in) {
      std::cerr << "cannot open '" << opt.file << "'\n";
      return kExitConfig;
    }
    try {
      constraints = load_custom_region(in, lower, upper);
    } catch (const std::exception& e) {
      std::cerr << "bad region file: " << e.what() << "\n";
      return kExitConfig;
    }
  } else {
    std::cerr << "unknown region '" << opt.which << "'\n";
    return kExitConfig;
  }

  const congame::GridRegion region =
      congame::rasterize(constraints, lower, upper, {opt.resolution, opt.resolution});

  const std::filesystem::path out_dir = resolve_output_dir(opt.output_dir);
  std::filesystem::create_directories(out_dir);
  {
    std::ofstream pgm(out_dir / "region.pgm");
    congame::write_pgm(pgm, region);
  }
  {
    std::ofstream csv(out_dir / "components.csv");
    congame::write_component_csv(csv, region);
  }
  {
    std::ofstream report(out_dir / "slice_report.txt");
    report << congame::slice_convexity_report(region);
  }
  std::cout << "components=" << region.component_count << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Log-barrier solver for continuous games with coupling constraints"};
  app.require_subcommand(1);

  RunOptions run_opt;
  CLI::App* run = app.add_subcommand("run", "Run a benchmark experiment");
  // Config files are applied before the regular flags (flags win), so the
  // echoed config.txt of a previous run reproduces it exactly.
  run->add_option("--config", run_opt.config, "key=value config file");
  for (int k = 1; k + 1 < argc; ++k) {
    if (std::string(argv[k]) == "--config") {
      std::ifstream cfg(argv[k + 1]);
      if (!cfg) {
        std::cerr << "cannot open config '" << argv[k + 1] << "'\n";
        return kExitConfig;
      }
      const std::string err = load_run_config(cfg, run_opt);
      if (!err.empty()) {
        std::cerr << "bad config: " << err << "\n";
        return kExitConfig;
      }
    }
  }
  run->add_option("--game", run_opt.game, "identical-interest | routing");
  run->add_option("--a", run_opt.a, "identical-interest parameter a");
  run->add_option("--b", run_opt.b, "identical-interest parameter b");
  run->add_option("--alpha", run_opt.alpha, "identical-interest threshold");
  run->add_option("--eta", run_opt.eta, "barrier regularization");
  run->add_option("--epsilon", run_opt.epsilon, "Nash gap target");
  run->add_option("--T,--iterations", run_opt.T, "iteration budget (-1 = game default)");
  run->add_option("--stepsize", run_opt.stepsize, "appendix | main-text | fixed");
  run->add_option("--gamma", run_opt.gamma, "stepsize for --stepsize fixed");
  run->add_option("--record-every", run_opt.record_every, "trajectory sampling stride");
  run->add_option("--nash-gap-every", run_opt.nash_gap_every, "gap evaluation stride");
  run->add_option("--x0", run_opt.x0, "start profile, comma separated");
  run->add_option("--seed", run_opt.seed, "seed for randomized verification sampling");
  run->add_option("--output-dir", run_opt.output_dir, "output directory");
  run->add_flag("--verify", run_opt.verify, "enable per-step debug assertions");
  run->add_option("--gap-tol", run_opt.gap_tol, "Nash gap evaluation tolerance");

  RegionOptions region_opt;
  CLI::App* region = app.add_subcommand("analyze-region", "Rasterize a feasible region");
  region->add_option("--which", region_opt.which,
                     "example-1 | example-2 | identical-interest | custom-file");
  region->add_option("--resolution", region_opt.resolution, "cells per axis");
  region->add_option("--file", region_opt.file, "custom region file");
  region->add_option("--output-dir", region_opt.output_dir, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (run->parsed()) return do_run(run_opt);
    return do_analyze_region(region_opt);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}
