// Copyright 2026 The Knockdown Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// knockdown: command-line front end over the C library.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "cli_support.hpp"
#include "heatmap.hpp"

namespace kdcli {
namespace {

constexpr double kTargetContinuous = -0.0101219;
constexpr double kTargetKappa180 = -0.0165257;
constexpr double kTargetNaive = -0.0920653;
constexpr double kNaiveLimit = -1.0 / 6.0;

kd_scale parse_scale(const std::string& s) {
  if (s == "discrete") return KD_SCALE_DISCRETE;
  if (s == "continuous") return KD_SCALE_CONTINUOUS;
  throw CommandError(kExitValidation, "scale must be 'discrete' or 'continuous'");
}

void require_len(const std::vector<double>& v, const kd_die* die, const char* what) {
  if (v.size() != kd_die_bins(die)) {
    throw CommandError(kExitValidation, std::string(what) + " has " + std::to_string(v.size()) +
                                            " entries but the die has " +
                                            std::to_string(kd_die_bins(die)) + " bins");
  }
}

void require_total(const std::vector<double>& v, std::int64_t n, const char* what) {
  double s = 0.0;
  for (double x : v) s += x;
  if (n > 0 && s != static_cast<double>(n)) {
    throw CommandError(kExitValidation, std::string(what) + " does not hold n tokens");
  }
}

std::string verdict(bool ok) { return ok ? "PASS" : "FAIL"; }

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

// ---- payoff ---------------------------------------------------------------

struct PayoffArgs {
  CommonOptions common;
  std::string scale = "discrete";
  std::int64_t n = 0;
  std::string a, b, a_file;
};

int cmd_payoff(const PayoffArgs& o, const CLI::App& app) {
  Run run("payoff", app, o.common);
  Die die = parse_die(o.common.die);
  const kd_scale scale = parse_scale(o.scale);
  const kd_quadrature q = o.common.quadrature();
  const auto b = parse_vector(o.b);
  require_len(b, die.get(), "--b");
  if (scale == KD_SCALE_DISCRETE) require_total(b, o.n, "--b");

  double value = 0.0, error = 0.0;
  if (!o.a_file.empty()) {
    Strategy alpha = load_strategy(o.a_file);
    if ((kd_strategy_scale(alpha.get()) == KD_SCALE_DISCRETE) != (scale == KD_SCALE_DISCRETE)) {
      throw CommandError(kExitValidation, "strategy file scale differs from --scale");
    }
    check(kd_payoff_mixed(die.get(), alpha.get(), b.data(), b.size(), &q, o.common.threads,
                          &value, &error),
          "payoff");
    run.line("K(alpha, b) = " + fixed(value, 7));
  } else {
    const auto a = parse_vector(o.a);
    require_len(a, die.get(), "--a");
    if (scale == KD_SCALE_DISCRETE) require_total(a, o.n, "--a");
    check(kd_payoff(die.get(), scale, a.data(), b.data(), a.size(), &q, &value, &error),
          "payoff");
    run.line("K(a, b) = " + fixed(value, 7));
    run.line("Pr[a beats b] = " + fixed(0.5 + value, 7));
  }
  run.line("quadrature error estimate = " + sci(error));
  return run.finish(kExitOk);
}

// ---- remark42 -------------------------------------------------------------

struct RemarkArgs {
  CommonOptions common;
  int resolution = 60;
  std::vector<std::string> skip;
  double check_tolerance = -1.0;
};

int cmd_remark42(const RemarkArgs& o, const CLI::App& app) {
  CommonOptions common = o.common;
  common.die = "1/3,1/3,1/3";
  Run run("remark42", app, common);
  for (const auto& s : o.skip) {
    if (s != "discrete" && s != "continuous") {
      throw CommandError(kExitValidation, "--skip takes 'discrete' or 'continuous'");
    }
  }
  const bool skip_c = std::find(o.skip.begin(), o.skip.end(), "continuous") != o.skip.end();
  const bool skip_d = std::find(o.skip.begin(), o.skip.end(), "discrete") != o.skip.end();
  auto tol = [&](double t) { return o.check_tolerance > 0.0 ? o.check_tolerance : t; };
  Die die = parse_die(common.die);
  const kd_quadrature q = common.quadrature();
  bool all = true;
  int ran = 0;

  if (!skip_c) {
    kd_strategy* s = nullptr;
    check(kd_uniform_simplex_strategy(1.0 / 6.0, o.resolution, 3, &s), "simplex strategy");
    Strategy alpha(s);
    const double origin[3] = {0.0, 0.0, 0.0};
    double v = 0.0, err = 0.0;
    check(kd_payoff_mixed(die.get(), alpha.get(), origin, 3, &q, common.threads, &v, &err),
          "continuous mixed payoff");
    const bool ok = std::abs(v - kTargetContinuous) <= tol(5e-4);
    all = all && ok;
    ++ran;
    run.line("continuous mixed worst payoff  K(uniform simplex r=" +
             std::to_string(o.resolution) + ", 0) = " + fixed(v, 7) + "  target " +
             fixed(kTargetContinuous, 7) + " +/- " + sci(tol(5e-4)) + "  " + verdict(ok));

    double prev = 0.0;
    bool decreasing = true;
    std::string ladder;
    for (double eps : {0.1, 0.05, 0.025}) {
      const double y[3] = {-eps, -eps, 2.0 * eps};
      double k = 0.0;
      check(kd_payoff(die.get(), KD_SCALE_CONTINUOUS, origin, y, 3, &q, &k, nullptr),
            "naive continuous payoff");
      if (eps < 0.1 && !(k < prev)) decreasing = false;
      prev = k;
      ladder += " eps=" + fixed(eps, 3) + ":" + fixed(k, 7);
    }
    double at_zero = 1.0;
    check(kd_payoff(die.get(), KD_SCALE_CONTINUOUS, origin, origin, 3, &q, &at_zero, nullptr),
          "naive continuous payoff");
    // K is linear in eps near 0, so two small steps extrapolate the limit.
    double small[2];
    for (int s = 0; s < 2; ++s) {
      const double eps = s == 0 ? 2e-3 : 1e-3;
      const double y[3] = {-eps, -eps, 2.0 * eps};
      check(kd_payoff(die.get(), KD_SCALE_CONTINUOUS, origin, y, 3, &q, &small[s], nullptr),
            "naive continuous payoff");
    }
    const double limit = 2.0 * small[1] - small[0];
    const bool ok2 = decreasing && std::abs(limit - kNaiveLimit) <= tol(0.02) && at_zero == 0.0;
    all = all && ok2;
    ++ran;
    run.line("continuous naive worst payoff limit  K(0, (-e,-e,2e)):" + ladder + " eps=0:" +
             fixed(at_zero, 7) + " eps->0:" + fixed(limit, 7) + "  target " +
             fixed(kNaiveLimit, 7) + " +/- " + sci(tol(0.02)) + "  " + verdict(ok2));
  }

  if (!skip_d) {
    kd_strategy* s = nullptr;
    check(kd_uniform_allocations_at_least(180, 3, 58, &s), "alpha_180");
    Strategy alpha(s);
    double kappa = 0.0;
    double resp[3];
    check(kd_kappa(die.get(), alpha.get(), &q, common.threads, &kappa, resp), "kappa_180");
    const bool ok = std::abs(kappa - kTargetKappa180) <= tol(1e-3);
    all = all && ok;
    ++ran;
    run.line("kappa_180 (uniform over " + std::to_string(kd_strategy_size(alpha.get())) +
             " allocations with >= 58 per bin) = " + fixed(kappa, 7) + "  best response (" +
             join({resp[0], resp[1], resp[2]}, 0) + ")  target " + fixed(kTargetKappa180, 7) +
             " +/- " + sci(tol(1e-3)) + "  " + verdict(ok));

    const double point[3] = {60.0, 60.0, 60.0};
    const double weight = 1.0;
    kd_strategy* pm = nullptr;
    check(kd_strategy_create(KD_SCALE_DISCRETE, 3, 180, 1, point, &weight, &pm), "point mass");
    Strategy naive(pm);
    double kn = 0.0;
    check(kd_kappa(die.get(), naive.get(), &q, common.threads, &kn, resp), "naive kappa");
    const bool ok2 = std::abs(kn - kTargetNaive) <= tol(1e-3);
    all = all && ok2;
    ++ran;
    run.line("discrete naive worst payoff  kappa(60,60,60) = " + fixed(kn, 7) +
             "  best response (" + join({resp[0], resp[1], resp[2]}, 0) + ")  target " +
             fixed(kTargetNaive, 7) + " +/- " + sci(tol(1e-3)) + "  " + verdict(ok2));
  }

  run.line(std::to_string(ran) + " checks run: " + (all ? "all passed" : "FAILURES"));
  if (!all) run.set_status("check_failed");
  return run.finish(all ? kExitOk : kExitCheckFailed);
}

// ---- solve ----------------------------------------------------------------

struct SolveArgs {
  CommonOptions common;
  std::string scale = "continuous";
  double h = 0.05;
  double bound = 0.6;
  std::int64_t n = 0;
  double eps = 0.01;
  std::int64_t max_iterations = 1000000;
  std::string cache_dir;
  bool no_cache = false;
};

int cmd_solve(const SolveArgs& o, const CLI::App& app) {
  Run run("solve", app, o.common);
  Die die = parse_die(o.common.die);
  const std::size_t k = kd_die_bins(die.get());
  const kd_scale scale = parse_scale(o.scale);
  const kd_quadrature q = o.common.quadrature();

  kd_grid* gp = nullptr;
  std::string desc = o.scale + " p=";
  for (std::size_t i = 0; i < k; ++i) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g,", kd_die_prob(die.get(), i));
    desc += buf;
  }
  if (scale == KD_SCALE_CONTINUOUS) {
    check(kd_grid_create_continuous(die.get(), o.h, o.bound, &gp), "grid");
    desc += " h=" + sci(o.h) + " B=" + sci(o.bound);
  } else {
    if (o.n < 1) throw CommandError(kExitValidation, "discrete solve needs --n");
    check(kd_grid_create_discrete(die.get(), o.n, app.count("--bound") ? o.bound : 0.0, &gp),
          "grid");
    desc += " n=" + std::to_string(o.n) + " B=" + (app.count("--bound") ? sci(o.bound) : "none");
  }
  Grid grid(gp);
  desc += " tol=" + sci(q.abs_tolerance);
  const std::size_t size = kd_grid_size(grid.get());
  run.line("grid: " + o.scale + " scale, " + std::to_string(size) + " points");

  std::string cache_path;
  if (!o.no_cache) {
    const std::filesystem::path dir =
        o.cache_dir.empty() ? o.common.output_dir() / "cache" : std::filesystem::path(o.cache_dir);
    std::filesystem::create_directories(dir);
    char name[64];
    std::snprintf(name, sizeof name, "matrix-%016llx.txt",
                  static_cast<unsigned long long>(fnv1a(desc)));
    cache_path = (dir / name).string();
  }
  kd_matrix* mp = nullptr;
  int hit = 0;
  check(kd_matrix_build(grid.get(), die.get(), &q, o.common.threads,
                        cache_path.empty() ? nullptr : cache_path.c_str(), &mp, &hit),
        "payoff matrix");
  Matrix matrix(mp);
  run.note("matrix_cache", cache_path.empty() ? "disabled" : (hit ? "hit" : "built"));

  kd_solution* sp = nullptr;
  check(kd_fictitious_play(matrix.get(), grid.get(), o.eps, o.max_iterations, &sp),
        "fictitious play");
  Solution sol(sp);
  const bool converged = kd_solution_converged(sol.get()) != 0;
  kd_strategy* stp = nullptr;
  check(kd_solution_strategy(sol.get(), &stp), "solution strategy");
  Strategy strategy(stp);

  run.line("iterations: " + std::to_string(kd_solution_iterations(sol.get())));
  run.line("exploitability: " + fixed(kd_solution_exploitability(sol.get()), 7) + " (target " +
           fixed(o.eps, 7) + ", " + (converged ? "reached" : "budget exhausted") + ")");
  run.line("value estimate: " + fixed(kd_solution_value(sol.get()), 7));
  const std::size_t support = kd_strategy_size(strategy.get());
  std::vector<double> lo(k, INFINITY), hi(k, -INFINITY), point(k);
  std::map<std::vector<double>, double> weight_of;
  for (std::size_t s = 0; s < support; ++s) {
    double w = 0.0;
    check(kd_strategy_entry(strategy.get(), s, point.data(), &w), "strategy entry");
    weight_of[point] = w;
    for (std::size_t i = 0; i < k; ++i) {
      lo[i] = std::min(lo[i], point[i]);
      hi[i] = std::max(hi[i], point[i]);
    }
  }
  run.line("support: " + std::to_string(support) + " points");
  for (std::size_t i = 0; i < k; ++i) {
    run.line("  coordinate " + std::to_string(i + 1) + " range [" +
             fixed(lo[i], scale == KD_SCALE_DISCRETE ? 0 : 4) + ", " +
             fixed(hi[i], scale == KD_SCALE_DISCRETE ? 0 : 4) + "]");
  }
  run.line("checkpoints (iteration exploitability):");
  for (std::size_t c = 0; c < kd_solution_checkpoint_count(sol.get()); ++c) {
    std::int64_t it = 0;
    double e = 0.0;
    check(kd_solution_checkpoint(sol.get(), c, &it, &e), "checkpoint");
    run.line("  " + std::to_string(it) + " " + fixed(e, 7));
  }

  check(kd_strategy_save(strategy.get(), run.output("solve_strategy.txt").string().c_str()),
        "save strategy");
  check(kd_strategy_save_csv(strategy.get(), run.output("solve_strategy.csv").string().c_str()),
        "save csv");
  if (k == 3) {
    std::vector<HeatCell> cells;
    for (std::size_t g = 0; g < size; ++g) {
      check(kd_grid_point(grid.get(), g, point.data()), "grid point");
      const auto it = weight_of.find(point);
      cells.push_back({{point[0], point[1], point[2]}, it == weight_of.end() ? 0.0 : it->second});
    }
    const double spacing = scale == KD_SCALE_CONTINUOUS ? o.h : 1.0;
    const std::string title = "exploitability " + fixed(kd_solution_exploitability(sol.get()), 4) +
                              ", " + std::to_string(support) + " support points";
    std::ofstream svg(run.output("solve_heatmap.svg"), std::ios::binary);
    svg << ternary_heatmap_svg(cells, spacing, title);
  }
  if (!converged) run.set_status("budget_exhausted");
  return run.finish(converged ? kExitOk : kExitBudget);
}

// ---- simulate -------------------------------------------------------------

struct SimulateArgs {
  CommonOptions common;
  std::string scale = "discrete";
  std::int64_t n = 0;
  std::string a, b, race;
  std::uint64_t trials = 1000000;
  std::uint64_t seed = 0;
};

int cmd_simulate(const SimulateArgs& o, const CLI::App& app) {
  Run run("simulate", app, o.common);
  run.set_seed(o.seed);
  Die die = parse_die(o.common.die);
  const kd_scale scale = parse_scale(o.scale);
  const kd_quadrature q = o.common.quadrature();
  const double t = static_cast<double>(o.trials);
  run.line("trials " + std::to_string(o.trials) + ", seed " + std::to_string(o.seed));

  if (!o.race.empty()) {
    if (!o.a.empty() || !o.b.empty()) {
      throw CommandError(kExitValidation, "--race cannot be combined with --a/--b");
    }
    const auto m = parse_vector(o.race);
    require_len(m, die.get(), "--race");
    std::vector<std::uint64_t> counts(m.size());
    std::uint64_t overflow = 0;
    std::vector<double> exact(m.size());
    check(kd_simulate_last_bin(die.get(), scale, m.data(), m.size(), o.trials, o.seed,
                               o.common.threads, counts.data(), &overflow),
          "simulate");
    check(scale == KD_SCALE_DISCRETE
              ? kd_last_bin_discrete(die.get(), m.data(), m.size(), &q, exact.data(), nullptr)
              : kd_last_bin_continuous(die.get(), m.data(), m.size(), &q, exact.data(), nullptr),
          "last bin");
    run.line("last bin  count  frequency  std.err  exact  z");
    for (std::size_t j = 0; j < m.size(); ++j) {
      const double f = static_cast<double>(counts[j]) / t;
      const double se = std::sqrt(exact[j] * (1.0 - exact[j]) / t);
      const double z = se > 0.0 ? (f - exact[j]) / se : 0.0;
      run.line("  " + std::to_string(j + 1) + "  " + std::to_string(counts[j]) + "  " +
               fixed(f, 7) + "  " + fixed(se, 7) + "  " + fixed(exact[j], 7) + "  " +
               fixed(z, 2));
    }
    run.line("overflow " + std::to_string(overflow));
    return run.finish(kExitOk);
  }

  const auto a = parse_vector(o.a);
  const auto b = parse_vector(o.b);
  require_len(a, die.get(), "--a");
  require_len(b, die.get(), "--b");
  if (scale == KD_SCALE_DISCRETE) {
    require_total(a, o.n, "--a");
    require_total(b, o.n, "--b");
  }
  kd_match_counts c{};
  check(kd_simulate_match(die.get(), scale, a.data(), b.data(), a.size(), o.trials, o.seed,
                          o.common.threads, &c),
        "simulate");
  double k = 0.0;
  check(kd_payoff(die.get(), scale, a.data(), b.data(), a.size(), &q, &k, nullptr), "payoff");
  const double f = (static_cast<double>(c.wins_a) + 0.5 * static_cast<double>(c.ties)) / t;
  const double p = 0.5 + k;
  const double se = std::sqrt(std::max(p * (1.0 - p), 0.0) / t);
  run.line("wins_a " + std::to_string(c.wins_a) + ", wins_b " + std::to_string(c.wins_b) +
           ", ties " + std::to_string(c.ties) + ", overflow " + std::to_string(c.overflow));
  run.line("Pr[a beats b] with ties split = " + fixed(f, 7) + " (std.err " + fixed(se, 7) + ")");
  run.line("exact engine value = " + fixed(p, 7) +
           (se > 0.0 ? ", z = " + fixed((f - p) / se, 2) : std::string()));
  return run.finish(kExitOk);
}

// ---- diagnostics ----------------------------------------------------------

struct DiagnosticsArgs {
  CommonOptions common;
  std::vector<std::string> checks = {"flatness", "change", "overplay", "undercut"};
  std::vector<std::int64_t> flat_n = {100, 400, 1600};
  std::vector<double> w = {2.0, 3.0};
  std::int64_t n = 100;
  std::string strategy;
  std::vector<double> deltas = {0.1, 0.2, 0.4};
  std::string x = "0.5,-0.2,-0.3";
  std::string y = "-0.3,0.4,-0.1";
  std::vector<double> undercut_deltas = {0.02, 0.01, 0.005};
};

int cmd_diagnostics(const DiagnosticsArgs& o, const CLI::App& app) {
  Run run("diagnostics", app, o.common);
  Die die = parse_die(o.common.die);
  const std::size_t k = kd_die_bins(die.get());
  const kd_quadrature q = o.common.quadrature();
  bool all = true;
  auto wants = [&](const char* c) {
    return std::find(o.checks.begin(), o.checks.end(), c) != o.checks.end();
  };
  for (const auto& c : o.checks) {
    if (c != "flatness" && c != "change" && c != "overplay" && c != "undercut" &&
        c != "spacing") {
      throw CommandError(kExitValidation, "unknown diagnostic '" + c + "'");
    }
  }

  if (wants("flatness")) {
    run.line("local flatness: max |second difference| at the proportional race");
    double lo = INFINITY, hi = 0.0;
    for (std::int64_t n : o.flat_n) {
      double m = 0.0, scaled = 0.0;
      check(kd_flatness(die.get(), n, &q, &m, &scaled), "flatness");
      lo = std::min(lo, scaled);
      hi = std::max(hi, scaled);
      run.line("  n=" + std::to_string(n) + "  max=" + sci(m) + "  max*n=" + fixed(scaled, 5));
    }
    const bool ok = hi <= 1.5 * lo;
    all = all && ok;
    run.line("  spread of max*n: factor " + fixed(hi / lo, 4) + " (limit 1.5)  " + verdict(ok));
  }

  if (wants("change")) {
    run.line("change probability when one bin is incremented, proportional race n=" +
             std::to_string(o.n));
    std::vector<double> counts(k);
    for (std::size_t i = 0; i < k; ++i) {
      counts[i] = std::max(1.0, std::round(kd_die_prob(die.get(), i) * o.n));
    }
    for (std::size_t i = 0; i < k; ++i) {
      double exact = 0.0, bound = 0.0;
      check(kd_change_probability(die.get(), counts.data(), k, i, &q, &exact, &bound), "change");
      const bool ok = exact <= bound;
      all = all && ok;
      run.line("  bin " + std::to_string(i + 1) + "  exact=" + fixed(exact, 7) +
               "  bound=" + fixed(bound, 7) + "  margin=" + fixed(bound - exact, 7) + "  " +
               verdict(ok));
    }
  }

  if (wants("overplay")) {
    run.line("overplay pairs at n=" + std::to_string(o.n) +
             ": Pr[eta beats xi] against 1/w^2");
    for (double w : o.w) {
      std::vector<double> eta(k), xi(k);
      double beat = 0.0, bound = 0.0;
      check(kd_overplay_pair(die.get(), o.n, w, &q, eta.data(), xi.data(), &beat, &bound),
            "overplay pair");
      const bool ok = beat < bound;
      all = all && ok;
      run.line("  w=" + fixed(w, 2) + "  eta=(" + join(eta, 0) + ")  xi=(" + join(xi, 0) +
               ")  Pr=" + sci(beat) + "  bound=" + fixed(bound, 7) + "  " + verdict(ok));
    }
  }

  if (wants("undercut")) {
    const auto x = parse_vector(o.x);
    const auto y = parse_vector(o.y);
    require_len(x, die.get(), "--x");
    require_len(y, die.get(), "--y");
    run.line("undercut: |K(undercut(x,d), y) - K(x, y)| / d^2");
    std::vector<double> ratio;
    for (double d : o.undercut_deltas) {
      double gap = 0.0;
      check(kd_undercut_gap(die.get(), x.data(), y.data(), k, d, &q, &gap), "undercut");
      ratio.push_back(gap / (d * d));
      run.line("  d=" + fixed(d, 4) + "  gap=" + sci(gap) + "  gap/d^2=" + fixed(ratio.back(), 6));
    }
    // Second order means the ratio settles as d shrinks.
    bool ok = true;
    if (ratio.size() >= 2) {
      const double a = ratio[ratio.size() - 2], b = ratio.back();
      ok = std::max(a, b) <= 1.5 * std::min(a, b) + 1e-6;
    }
    all = all && ok;
    run.line("  ratio settles between the two smallest d (factor <= 1.5)  " + verdict(ok));
  }

  if (wants("spacing")) {
    if (o.strategy.empty()) {
      throw CommandError(kExitValidation, "the spacing diagnostic needs --strategy");
    }
    Strategy s = load_strategy(o.strategy);
    run.line("marginal spacing Pr[|x_i - y_i| <= d] / d for " + o.strategy);
    for (std::size_t i = 0; i < kd_strategy_bins(s.get()); ++i) {
      double lo = INFINITY, hi = 0.0;
      std::string row;
      for (double d : o.deltas) {
        double v = 0.0;
        check(kd_marginal_spacing(s.get(), i, d, &v), "spacing");
        lo = std::min(lo, v / d);
        hi = std::max(hi, v / d);
        row += "  d=" + fixed(d, 3) + ":" + fixed(v / d, 4);
      }
      const bool ok = hi <= 3.0 * lo;
      all = all && ok;
      run.line("  coordinate " + std::to_string(i + 1) + row + "  " + verdict(ok));
    }
  }

  if (!all) run.set_status("check_failed");
  run.line(all ? "all bounds hold" : "BOUND VIOLATED");
  return run.finish(all ? kExitOk : kExitCheckFailed);
}

}  // namespace
}  // namespace kdcli

int main(int argc, char** argv) {
  using namespace kdcli;
  CLI::App app{"Exact payoffs, equilibria and diagnostics for the token race game"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kd_version());

  PayoffArgs pay;
  auto* payoff = app.add_subcommand("payoff", "Payoff K(a, b) on the discrete or continuous scale");
  pay.common.add_to(*payoff);
  payoff->add_option("--scale", pay.scale, "discrete or continuous")->capture_default_str();
  payoff->add_option("--n", pay.n, "Token total (discrete; checked against --a/--b)");
  payoff->add_option("--a", pay.a, "First strategy, comma separated");
  payoff->add_option("--a-file", pay.a_file, "Mixed first strategy in strategy text format");
  payoff->add_option("--b", pay.b, "Second strategy, comma separated")->required();

  RemarkArgs rem;
  auto* remark = app.add_subcommand("remark42", "Reproduce the simple-strategy payoff checks");
  rem.common.add_to(*remark, false);
  remark->add_option("--resolution", rem.resolution, "Simplex quadrature resolution r")
      ->capture_default_str();
  remark->add_option("--skip", rem.skip, "Skip 'discrete' or 'continuous' checks");
  remark->add_option("--check-tolerance", rem.check_tolerance,
                     "Override every acceptance tolerance");

  SolveArgs sol;
  auto* solve = app.add_subcommand("solve", "Fictitious play on a strategy grid");
  sol.common.add_to(*solve);
  solve->add_option("--scale", sol.scale, "discrete or continuous")->capture_default_str();
  solve->add_option("--spacing", sol.h, "Continuous lattice spacing")->capture_default_str();
  solve->add_option("--bound", sol.bound, "Per-coordinate deviation bound B")
      ->capture_default_str();
  solve->add_option("--n", sol.n, "Token total (discrete)");
  solve->add_option("--eps", sol.eps, "Target exploitability")->capture_default_str();
  solve->add_option("--max-iterations", sol.max_iterations, "Iteration budget")
      ->capture_default_str();
  solve->add_option("--cache-dir", sol.cache_dir, "Payoff matrix cache (default <out-dir>/cache)");
  solve->add_flag("--no-cache", sol.no_cache, "Do not read or write the matrix cache");

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo check of the exact engines");
  sim.common.add_to(*simulate);
  simulate->add_option("--scale", sim.scale, "discrete or continuous")->capture_default_str();
  simulate->add_option("--n", sim.n, "Token total (discrete; checked against --a/--b)");
  simulate->add_option("--a", sim.a, "First strategy");
  simulate->add_option("--b", sim.b, "Second strategy");
  simulate->add_option("--race", sim.race, "Race levels M (or m) for a last-bin simulation");
  simulate->add_option("--trials", sim.trials, "Number of trials")->capture_default_str();
  simulate->add_option("--seed", sim.seed, "Master seed")->capture_default_str();

  DiagnosticsArgs dia;
  auto* diagnostics = app.add_subcommand("diagnostics", "Empirical checks of the analytic bounds");
  dia.common.add_to(*diagnostics);
  diagnostics->add_option("--check", dia.checks, "flatness, change, overplay, undercut, spacing")
      ->capture_default_str()
      ->delimiter(',');
  diagnostics->add_option("--flat-n", dia.flat_n, "Token totals for the flatness check")
      ->capture_default_str()
      ->delimiter(',');
  diagnostics->add_option("--w", dia.w, "Overplay gap multipliers")
      ->capture_default_str()
      ->delimiter(',');
  diagnostics->add_option("--n", dia.n, "Token total for change/overplay checks")
      ->capture_default_str();
  diagnostics->add_option("--strategy", dia.strategy, "Strategy file for the spacing check");
  diagnostics->add_option("--delta", dia.deltas, "Spacing thresholds")
      ->capture_default_str()
      ->delimiter(',');
  diagnostics->add_option("--x", dia.x, "Undercut base point")->capture_default_str();
  diagnostics->add_option("--y", dia.y, "Undercut opponent")->capture_default_str();
  diagnostics->add_option("--undercut-delta", dia.undercut_deltas, "Undercut step ladder")
      ->capture_default_str()
      ->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    if (*payoff) {
      if (pay.a.empty() == pay.a_file.empty()) {
        throw CommandError(kExitValidation, "give exactly one of --a and --a-file");
      }
      return cmd_payoff(pay, *payoff);
    }
    if (*remark) return cmd_remark42(rem, *remark);
    if (*solve) return cmd_solve(sol, *solve);
    if (*simulate) {
      if (sim.race.empty() && (sim.a.empty() || sim.b.empty())) {
        throw CommandError(kExitValidation, "simulate needs --race or both --a and --b");
      }
      return cmd_simulate(sim, *simulate);
    }
    if (*diagnostics) return cmd_diagnostics(dia, *diagnostics);
  } catch (const CommandError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitFailure;
}
