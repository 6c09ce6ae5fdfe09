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

// Acceptance checks: one PASS/FAIL line per criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "diagnostics.hpp"
#include "oracles.hpp"
#include "simulator.hpp"
#include "solver.hpp"

using namespace knockdown;

namespace {

struct Options {
  std::string cache_dir;
  unsigned threads = 0;
};

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& clause) {
    if (!ok) pass = false;
    detail += (detail.empty() ? "" : "; ") + clause + (ok ? " ok" : " FAILED");
  }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const DieSpec& u3() {
  static const DieSpec d = DieSpec::uniform(3);
  return d;
}

Outcome criterion1(const Options& o) {
  Outcome out;
  const Deviation origin({0.0, 0.0, 0.0});
  std::vector<double> values;
  std::string ladder;
  for (int r : {15, 30, 60, 120}) {
    const auto t0 = std::chrono::steady_clock::now();
    const double v = payoff_mixed(uniform_simplex_strategy(1.0 / 6, r, 3), origin, u3(), {},
                                  o.threads).value;
    values.push_back(v);
    ladder += " r=" + std::to_string(r) + ":" + fmt("%.7f", v) + fmt(" (%.2fs)", seconds_since(t0));
  }
  out.detail = "ladder" + ladder + "; ";
  bool shrinking = true;
  for (std::size_t i = 2; i < values.size(); ++i) {
    shrinking = shrinking && std::abs(values[i] - values[i - 1]) < std::abs(values[i - 1] - values[i - 2]);
  }
  Outcome clauses;
  clauses.require(shrinking, "successive differences shrink");
  clauses.require(std::abs(values[2] + 0.0101219) <= 5e-4,
                  "default r=60 " + fmt("%.7f", values[2]) + " within 5e-4 of -0.0101219");
  out.pass = clauses.pass;
  out.detail += clauses.detail;
  return out;
}

Outcome criterion2(const Options& o) {
  Outcome out;
  const auto t0 = std::chrono::steady_clock::now();
  const auto alpha = uniform_allocations_at_least(180, 3, 58);
  out.require(alpha.size() == 28, "alpha_180 has " + std::to_string(alpha.size()) + " allocations");
  const auto k = kappa(alpha, u3(), {}, o.threads);
  out.require(std::abs(k.kappa + 0.0165257) <= 1e-3,
              "kappa_180 = " + fmt("%.7f", k.kappa) + " within 1e-3 of -0.0165257");
  out.detail += fmt(" (%.2fs)", seconds_since(t0));
  return out;
}

Outcome criterion3(const Options& o) {
  Outcome out;
  const auto k = kappa(DiscreteMixed::point_mass(TokenAllocation({60, 60, 60})), u3(), {}, o.threads);
  out.require(std::abs(k.kappa + 0.0920653) <= 1e-3,
              "kappa((60,60,60)) = " + fmt("%.7f", k.kappa) + " within 1e-3 of -0.0920653");
  return out;
}

Outcome criterion4(const Options&) {
  Outcome out;
  const Deviation origin({0.0, 0.0, 0.0});
  auto naive = [&](double e) {
    return payoff_continuous(origin, Deviation({-e, -e, 2 * e}), u3()).value;
  };
  const double k1 = naive(0.1), k2 = naive(0.05), k3 = naive(0.025);
  out.require(k1 > k2 && k2 > k3 && k3 > -1.0 / 6,
              "decreasing toward -1/6: " + fmt("%.7f", k1) + fmt(" > %.7f", k2) + fmt(" > %.7f", k3));
  out.require(std::abs(k3 + 1.0 / 6) <= 0.02,
              "eps=0.025 gap " + fmt("%.7f", std::abs(k3 + 1.0 / 6)) + " <= 0.02");
  out.require(naive(0.0) == 0.0, "K at eps=0 is " + fmt("%.1f", naive(0.0)));
  return out;
}

Outcome criterion5(const Options& o) {
  Outcome out;
  struct Case {
    std::vector<double> p;
    std::vector<double> levels;
    bool discrete;
  };
  const double third = 1.0 / 3;
  const std::vector<Case> cases = {
      {{0.5, 0.5}, {2, 1}, true},
      {{0.5, 0.5}, {1, 1}, true},
      {{third, third, third}, {1, 1, 1}, true},
      {{0.5, 0.3, 0.2}, {5, 3, 2}, true},
      {{third, third, third}, {60, 58, 62}, true},
      {{0.2, 0.3, 0.5}, {10, 0, 5}, true},
      {{third, third, third}, {0, 0, 0}, false},
      {{third, third, third}, {0.2, -0.1, -0.1}, false},
      {{0.2, 0.3, 0.5}, {0.5, -0.2, 0.1}, false},
      {{0.5, 0.5}, {0, 0}, false},
  };
  SimConfig cfg;
  cfg.trials = 1'000'000;
  cfg.threads = o.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : o.threads;
  double worst_z = 0.0;
  int failures = 0;
  for (std::size_t c = 0; c < cases.size(); ++c) {
    const auto& cs = cases[c];
    const DieSpec d(cs.p);
    cfg.seed = 1000 + c;
    LastBinDistribution exact;
    EmpiricalLastBin sim;
    if (cs.discrete) {
      std::vector<std::int64_t> m(cs.levels.begin(), cs.levels.end());
      const PoissonRace race(d, m);
      exact = last_bin_discrete(race);
      sim = simulate_last_bin(race, cfg);
    } else {
      const GaussianRace race(d, cs.levels);
      exact = last_bin_continuous(race);
      sim = simulate_last_bin(race, cfg);
    }
    if (c == 0 && (std::abs(exact.probs[0] - 0.75) > 1e-9 || std::abs(exact.probs[1] - 0.25) > 1e-9)) {
      ++failures;
    }
    const auto freq = sim.frequencies();
    for (std::size_t j = 0; j < exact.probs.size(); ++j) {
      const double se = oracle::binomial_se(exact.probs[j], cfg.trials);
      const double diff = std::abs(freq[j] - exact.probs[j]);
      if (se == 0.0) {
        if (diff != 0.0) ++failures;
        continue;
      }
      const double z = diff / se;
      worst_z = std::max(worst_z, z);
      if (z > 4.0) ++failures;
    }
    if (sim.overflow != 0) ++failures;
  }
  out.require(failures == 0, "10 cases, 1e6 trials each, worst |z| = " + fmt("%.2f", worst_z) +
                                 ", M=(2,1) -> (3/4, 1/4)");
  return out;
}

Outcome criterion6(const Options& o) {
  Outcome out;
  std::mt19937_64 rng(2026);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::vector<DieSpec> dice = {DieSpec::uniform(3), DieSpec({0.2, 0.3, 0.5}),
                                     DieSpec({0.1, 0.9}), DieSpec({0.25, 0.25, 0.25, 0.25})};
  auto random_allocation = [&](std::int64_t n, std::size_t k) {
    std::vector<std::int64_t> c(k, 0);
    for (std::int64_t t = 0; t < n; ++t) c[rng() % k] += 1;
    return TokenAllocation(c);
  };
  auto random_deviation = [&](std::size_t k) {
    std::vector<double> x(k);
    double s = 0.0;
    for (auto& v : x) {
      v = unit(rng) - 0.5;
      s += v;
    }
    for (auto& v : x) v -= s / static_cast<double>(k);
    return Deviation(x);
  };

  double anti = 0.0, norm = 0.0;
  bool beats_exact = true;
  for (int t = 0; t < 200; ++t) {
    const auto& d = dice[t % dice.size()];
    const auto n = static_cast<std::int64_t>(1 + rng() % 60);
    const auto a = random_allocation(n, d.bins()), b = random_allocation(n, d.bins());
    anti = std::max(anti, std::abs(payoff_discrete(a, b, d).value + payoff_discrete(b, a, d).value));
    beats_exact = beats_exact && beats_discrete(a, b, d) + beats_discrete(b, a, d) == 1.0;
    norm = std::max(norm, std::abs(last_bin_discrete(PoissonRace(d, race_counts(a, b))).sum() - 1.0));

    const auto x = random_deviation(d.bins()), y = random_deviation(d.bins());
    anti = std::max(anti, std::abs(payoff_continuous(x, y, d).value + payoff_continuous(y, x, d).value));
    std::vector<double> m(x.values().begin(), x.values().end());
    norm = std::max(norm, std::abs(last_bin_continuous(GaussianRace(d, m)).sum() - 1.0));
  }
  out.require(anti <= 1e-9, "antisymmetry " + fmt("%.1e", anti));
  out.require(norm <= 1e-9, "normalization " + fmt("%.1e", norm));
  out.require(beats_exact, "beats(a,b)+beats(b,a)=1 exactly");

  double worst = -1.0;
  for (int t = 0; t < 50; ++t) {
    const auto& d = dice[t % 3];
    const auto n = static_cast<std::int64_t>(3 + rng() % 28);
    std::vector<DiscreteMixed::Entry> entries;
    std::vector<TokenAllocation> seen;
    const std::size_t support = 1 + rng() % 5;
    double total = 0.0;
    while (seen.size() < support) {
      auto a = random_allocation(n, d.bins());
      if (std::find(seen.begin(), seen.end(), a) != seen.end()) continue;
      seen.push_back(a);
      const double w = 0.1 + unit(rng);
      entries.push_back({a, w});
      total += w;
    }
    for (auto& e : entries) e.weight /= total;
    worst = std::max(worst, kappa(DiscreteMixed(entries), d, {}, o.threads).kappa);
  }
  out.require(worst <= 0.0, "kappa <= 0 on 50 random mixed strategies (max " + fmt("%.3e", worst) + ")");
  return out;
}

Outcome criterion7(const Options&) {
  Outcome out;
  double lo = INFINITY, hi = 0.0;
  std::string values;
  for (std::int64_t n : {100, 400, 1600}) {
    const auto f = flatness(u3(), n);
    lo = std::min(lo, f.scaled);
    hi = std::max(hi, f.scaled);
    values += " n=" + std::to_string(n) + ":" + fmt("%.5f", f.scaled);
  }
  out.require(hi <= 1.5 * lo, "max|D|*n" + values + ", spread " + fmt("%.4f", hi / lo) + " <= 1.5");
  return out;
}

Outcome criterion8(const Options&) {
  Outcome out;
  for (double w : {2.0, 3.0}) {
    const auto pr = overplay_pair(u3(), 100, w);
    const double required = w * std::sqrt(3.0 * 100) / (1.0 / 3);
    out.require(pr.gap >= required - 1e-9 && pr.beat_probability < 1.0 / (w * w),
                fmt("w=%.0f", w) + " gap " + fmt("%.2f", pr.gap) + " beat " +
                    fmt("%.3e", pr.beat_probability) + " < " + fmt("%.4f", 1.0 / (w * w)));
  }
  return out;
}

// Shared by criteria 9 and 10: the default k = 3 continuous solve.
struct Solved {
  StrategyGrid grid;
  SolveResult result;
  ContinuousMixed strategy = ContinuousMixed::point_mass(Deviation({0.0}));
  bool from_cache = false;
  double seconds = 0.0;
};

const Solved& default_solve(const Options& o) {
  static const Solved s = [&] {
    Solved r;
    const auto t0 = std::chrono::steady_clock::now();
    r.grid = build_continuous_grid(u3(), 0.05, 0.6);
    const auto key = matrix_cache_key(r.grid, u3(), {});
    std::optional<PayoffMatrix> m;
    std::string path;
    if (!o.cache_dir.empty()) {
      std::filesystem::create_directories(o.cache_dir);
      path = (std::filesystem::path(o.cache_dir) / "default-grid-matrix.txt").string();
      m = load_matrix(path, key);
    }
    r.from_cache = m.has_value();
    if (!m) {
      m = build_matrix(r.grid, u3(), {}, o.threads);
      if (!path.empty()) save_matrix(path, key, *m);
    }
    r.result = fictitious_play(*m, 0.01, 1'000'000);
    r.strategy = to_continuous_mixed(r.grid, r.result.weights);
    r.seconds = seconds_since(t0);
    return r;
  }();
  return s;
}

Outcome criterion9(const Options& o) {
  Outcome out;
  const auto& s = default_solve(o);
  // Recompute the worst case straight from the engine, not the matrix.
  const auto br = best_response(s.strategy, s.grid, u3(), {}, o.threads);
  const double e = -br.payoff;
  out.require(s.grid.size() == 703 && e <= 0.02,
              "703-point grid, engine exploitability " + fmt("%.5f", e) + " <= 0.02 after " +
                  std::to_string(s.result.iterations) + " iterations" +
                  fmt(" (%.1fs", s.seconds) + (s.from_cache ? ", cached matrix)" : ")"));
  out.require(std::abs(s.result.value) <= 0.005, "value " + fmt("%.5f", s.result.value));

  const DieSpec d({1.0 / 3, 2.0 / 3});
  const auto g = build_discrete_grid(d, 20);
  const auto r = fictitious_play(build_matrix(g, d, {}, o.threads), 1e-9, 100000);
  const auto alpha = to_discrete_mixed(g, r.weights);
  const std::int64_t m = oracle::binomial_median(20, 1.0 / 3);
  const bool pure = alpha.size() == 1 && alpha[0].strategy == TokenAllocation({m, 20 - m});
  out.require(pure, "k=2 n=20 solves to (" + std::to_string(m) + "," + std::to_string(20 - m) + ")");
  return out;
}

Outcome criterion10(const Options& o) {
  Outcome out;
  const auto& s = default_solve(o);
  double lo = INFINITY, hi = -INFINITY;
  for (const auto& e : s.strategy.entries()) {
    for (double v : e.strategy.values()) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  out.require(lo >= -0.35 && hi <= 0.40, std::to_string(s.strategy.size()) +
                                             " support points, coordinates in [" +
                                             fmt("%.2f", lo) + ", " + fmt("%.2f", hi) +
                                             "] within [-0.35, 0.40]");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance checks"};
  std::vector<int> selected;
  Options o;
  app.add_option("--criterion", selected, "Criteria to run (default all)")
      ->check(CLI::Range(1, 10));
  app.add_option("--cache-dir", o.cache_dir, "Directory for the shared payoff matrix");
  app.add_option("--threads", o.threads, "Worker threads (0 = all)");
  CLI11_PARSE(app, argc, argv);
  if (selected.empty()) {
    for (int c = 1; c <= 10; ++c) selected.push_back(c);
  }

  const std::vector<std::function<Outcome(const Options&)>> checks = {
      criterion1, criterion2, criterion3, criterion4, criterion5,
      criterion6, criterion7, criterion8, criterion9, criterion10};
  bool all = true;
  for (int c : selected) {
    Outcome r;
    try {
      r = checks[c - 1](o);
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail = std::string("error: ") + e.what();
    }
    all = all && r.pass;
    std::printf("criterion %d: %s  %s\n", c, r.pass ? "PASS" : "FAIL", r.detail.c_str());
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
