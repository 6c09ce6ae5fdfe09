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

#include "solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>

#include "parallel.hpp"

namespace knockdown {
namespace {

constexpr double kLatticeSlack = 1e-9;

void lattice_walk(std::size_t k, std::int64_t target, std::span<const std::int64_t> lo,
                  std::span<const std::int64_t> hi, std::vector<std::int64_t>& prefix,
                  std::int64_t partial, const std::function<void(const std::vector<std::int64_t>&)>& emit) {
  const std::size_t i = prefix.size();
  if (i + 1 == k) {
    const std::int64_t last = target - partial;
    if (last >= lo[i] && last <= hi[i]) {
      prefix.push_back(last);
      emit(prefix);
      prefix.pop_back();
    }
    return;
  }
  // Remaining coordinates must be able to absorb the rest of the target.
  std::int64_t rest_lo = 0;
  std::int64_t rest_hi = 0;
  for (std::size_t j = i + 1; j < k; ++j) {
    rest_lo += lo[j];
    rest_hi += hi[j];
  }
  for (std::int64_t v = lo[i]; v <= hi[i]; ++v) {
    const std::int64_t need = target - partial - v;
    if (need < rest_lo) break;
    if (need > rest_hi) continue;
    prefix.push_back(v);
    lattice_walk(k, target, lo, hi, prefix, partial + v, emit);
    prefix.pop_back();
  }
}

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

double overplay_limit(const DieSpec& d, std::int64_t n) {
  const double w = std::sqrt(3.0 + std::sqrt(5.0));
  const double kn = static_cast<double>(d.bins()) * static_cast<double>(n);
  return (3.0 * w * std::sqrt(kn) + 1.0) / d.min_prob();
}

StrategyGrid build_continuous_grid(const DieSpec& d, double spacing, double bound) {
  if (!(spacing > 0.0) || !std::isfinite(spacing)) throw ValidationError("grid spacing must be positive");
  if (!(bound > 0.0) || !std::isfinite(bound)) throw ValidationError("grid bound must be positive");
  const std::size_t k = d.bins();
  const auto below = static_cast<std::int64_t>(std::floor(bound / spacing + kLatticeSlack));
  const auto above = static_cast<std::int64_t>(
      std::floor(static_cast<double>(k - 1) * bound / spacing + kLatticeSlack));
  std::vector<std::int64_t> lo(k, -below);
  std::vector<std::int64_t> hi(k, above);

  StrategyGrid g;
  g.scale = Scale::continuous;
  g.bins = k;
  g.spacing = spacing;
  g.bound = bound;
  std::vector<std::int64_t> prefix;
  lattice_walk(k, 0, lo, hi, prefix, 0, [&](const std::vector<std::int64_t>& a) {
    std::vector<double> x(k);
    for (std::size_t i = 0; i < k; ++i) x[i] = spacing * static_cast<double>(a[i]);
    g.deviations.emplace_back(std::move(x));
    g.lattice.push_back(a);
  });
  if (g.deviations.empty()) throw ValidationError("strategy grid is empty");
  return g;
}

StrategyGrid build_discrete_grid(const DieSpec& d, std::int64_t n, std::optional<double> bound) {
  if (n < 1) throw ValidationError("token total must be positive");
  if (bound && !(*bound > 0.0)) throw ValidationError("grid bound must be positive");
  const std::size_t k = d.bins();
  const double nn = static_cast<double>(n);
  const double root = std::sqrt(nn);
  const double limit = overplay_limit(d, n);
  std::vector<std::int64_t> lo(k, 0);
  std::vector<std::int64_t> hi(k, n);
  for (std::size_t i = 0; i < k; ++i) {
    const double top = d.prob(i) * (nn + limit);
    hi[i] = std::min<std::int64_t>(hi[i], static_cast<std::int64_t>(std::floor(top + kLatticeSlack)));
    if (bound) {
      const double centre = d.prob(i) * nn;
      lo[i] = std::max<std::int64_t>(
          lo[i], static_cast<std::int64_t>(std::ceil(centre - *bound * root - kLatticeSlack)));
      hi[i] = std::min<std::int64_t>(
          hi[i], static_cast<std::int64_t>(std::floor(
                     centre + static_cast<double>(k - 1) * *bound * root + kLatticeSlack)));
    }
  }
  StrategyGrid g;
  g.scale = Scale::discrete;
  g.bins = k;
  g.tokens = n;
  g.spacing = 1.0 / root;
  g.bound = bound.value_or(std::numeric_limits<double>::infinity());
  std::vector<std::int64_t> prefix;
  lattice_walk(k, n, lo, hi, prefix, 0, [&](const std::vector<std::int64_t>& a) {
    g.allocations.emplace_back(a);
    g.lattice.push_back(a);
  });
  if (g.allocations.empty()) throw ValidationError("strategy grid is empty");
  return g;
}

PayoffMatrix build_matrix(const StrategyGrid& g, const DieSpec& d, const numerics::QuadratureSpec& q,
                          unsigned threads) {
  if (g.bins != d.bins()) throw DimensionError("grid and die have different bin counts");
  const std::size_t n = g.size();
  if (n == 0) throw ValidationError("strategy grid is empty");
  PayoffMatrix m(n);
  std::vector<double> row_error(n, 0.0);
  if (g.scale == Scale::discrete) {
    DiscreteEngine engine(d, q);
    parallel_for(n, threads, [&](std::size_t i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const auto p = engine.payoff(g.allocations[i], g.allocations[j]);
        m.set_pair(i, j, p.value);
        row_error[i] = std::max(row_error[i], p.error);
      }
    });
  } else {
    parallel_for(n, threads, [&](std::size_t i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const auto p = payoff_continuous(g.deviations[i], g.deviations[j], d, q);
        m.set_pair(i, j, p.value);
        row_error[i] = std::max(row_error[i], p.error);
      }
    });
  }
  m.max_error = *std::max_element(row_error.begin(), row_error.end());
  return m;
}

std::string matrix_cache_key(const StrategyGrid& g, const DieSpec& d,
                             const numerics::QuadratureSpec& q) {
  std::ostringstream os;
  os << "scale=" << to_string(g.scale) << " k=" << g.bins << " p=";
  for (std::size_t i = 0; i < d.bins(); ++i) os << (i ? "," : "") << format_double(d.prob(i));
  os << " n=" << g.tokens << " h=" << format_double(g.spacing) << " B=" << format_double(g.bound)
     << " size=" << g.size() << " tol=" << format_double(q.abs_tolerance)
     << " trunc=" << format_double(q.truncation_sigmas);
  return os.str();
}

void save_matrix(const std::string& path, const std::string& key, const PayoffMatrix& m) {
  std::ostringstream body;
  body << "knockdown-matrix 1\n";
  body << "key " << key << "\n";
  body << "size " << m.size() << "\n";
  body << "max_error " << format_double(m.max_error) << "\n";
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < m.size(); ++j) body << (j ? " " : "") << format_double(m(i, j));
    body << "\n";
  }
  const std::string text = body.str();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write matrix cache " + path);
  char hash[32];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(fnv1a(text)));
  out << text << "hash " << hash << "\n";
  if (!out) throw std::runtime_error("failed writing matrix cache " + path);
}

std::optional<PayoffMatrix> load_matrix(const std::string& path, const std::string& key) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::string all((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const auto pos = all.rfind("hash ");
  if (pos == std::string::npos) return std::nullopt;
  const std::string text = all.substr(0, pos);
  char expected[32];
  std::snprintf(expected, sizeof expected, "%016llx", static_cast<unsigned long long>(fnv1a(text)));
  std::string stored = all.substr(pos + 5);
  while (!stored.empty() && (stored.back() == '\n' || stored.back() == '\r')) stored.pop_back();
  if (stored != expected) return std::nullopt;

  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line) || line != "knockdown-matrix 1") return std::nullopt;
  if (!std::getline(is, line) || line != "key " + key) return std::nullopt;
  std::string word;
  std::size_t n = 0;
  if (!(is >> word >> n) || word != "size") return std::nullopt;
  double max_error = 0.0;
  if (!(is >> word >> max_error) || word != "max_error") return std::nullopt;
  PayoffMatrix m(n);
  auto data = m.mutable_data();
  for (auto& v : data) {
    if (!(is >> v)) return std::nullopt;
  }
  m.max_error = max_error;
  return m;
}

double exploitability(const PayoffMatrix& p, std::span<const double> weights) {
  const std::size_t n = p.size();
  std::vector<double> column(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (weights[i] == 0.0) continue;
    const auto row = p.row(i);
    for (std::size_t j = 0; j < n; ++j) column[j] += weights[i] * row[j];
  }
  return 0.0 - *std::min_element(column.begin(), column.end());
}

namespace {

std::vector<double> prune_weights(std::vector<double> w, double fraction) {
  const double top = *std::max_element(w.begin(), w.end());
  double kept = 0.0;
  for (auto& x : w) {
    if (x < fraction * top) x = 0.0;
    kept += x;
  }
  for (auto& x : w) x /= kept;
  return w;
}

}  // namespace

SolveResult fictitious_play(const PayoffMatrix& p, double eps, std::int64_t max_iterations,
                            const FictitiousPlayOptions& options) {
  const std::size_t n = p.size();
  if (n == 0) throw ValidationError("payoff matrix is empty");
  if (!(eps >= 0.0)) throw ValidationError("target exploitability must be nonnegative");
  if (max_iterations < 1) throw ValidationError("fictitious play needs at least one iteration");
  if (options.checkpoint_every < 1) throw ValidationError("checkpoint interval must be positive");

  // Iterate t averages the uniform start with t - 1 best responses.
  std::vector<double> counts(n, 1.0 / static_cast<double>(n));
  std::vector<double> column_sum(n, 0.0);  // sum_i counts_i P(i, j)
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = p.row(i);
    for (std::size_t j = 0; j < n; ++j) column_sum[j] += counts[i] * row[j];
  }

  SolveResult result;
  result.exploitability = std::numeric_limits<double>::infinity();
  auto consider = [&](std::vector<double> w, double expl) {
    if (expl < result.exploitability) {
      result.exploitability = expl;
      result.weights = std::move(w);
    }
  };
  auto averaged = [&](double t) {
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = counts[i] / t;
    return w;
  };

  std::int64_t t = 1;
  for (;; ++t) {
    std::size_t response = 0;
    double worst = column_sum[0];
    for (std::size_t j = 1; j < n; ++j) {
      if (column_sum[j] < worst) {
        worst = column_sum[j];
        response = j;
      }
    }
    const double td = static_cast<double>(t);
    const double expl = -worst / td;
    const bool checkpoint = t == 1 || t % options.checkpoint_every == 0;
    if (expl < result.exploitability) consider(averaged(td), expl);
    if (checkpoint && options.prune_fraction > 0.0 && result.exploitability > eps) {
      // The averaged iterate keeps 1/t of the uniform start; pruning exposes
      // a sparse strategy that can certify much smaller targets.
      auto w = prune_weights(averaged(td), options.prune_fraction);
      const double e = exploitability(p, w);
      consider(std::move(w), e);
    }
    if (checkpoint) result.checkpoints.push_back({t, result.exploitability});
    if (result.exploitability <= eps) {
      result.converged = true;
      break;
    }
    if (t >= max_iterations) break;
    counts[response] += 1.0;
    const auto row = p.row(response);
    for (std::size_t j = 0; j < n; ++j) column_sum[j] += row[j];
  }
  result.iterations = t;
  result.exploitability = exploitability(p, result.weights);

  if (options.prune_fraction > 0.0) {
    auto pruned = prune_weights(result.weights, options.prune_fraction);
    const double e = exploitability(p, pruned);
    if (e <= std::max(eps, result.exploitability)) {
      result.weights = std::move(pruned);
      result.exploitability = e;
    }
  }
  if (result.checkpoints.back().iteration != t ||
      result.checkpoints.back().exploitability > result.exploitability) {
    result.checkpoints.push_back({t, std::min(result.checkpoints.back().exploitability,
                                              result.exploitability)});
  }

  // For an antisymmetric matrix the row-side upper bound mirrors the
  // column-side lower bound, so the midpoint estimates the value.
  double upper = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = p.row(i);
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += row[j] * result.weights[j];
    upper = std::max(upper, s);
  }
  result.value = 0.5 * (upper - result.exploitability);
  return result;
}

DiscreteMixed to_discrete_mixed(const StrategyGrid& g, std::span<const double> weights) {
  if (g.scale != Scale::discrete) throw ValidationError("grid is not on the discrete scale");
  std::vector<DiscreteMixed::Entry> e;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (weights[i] > 0.0) e.push_back({g.allocations[i], weights[i]});
  }
  return DiscreteMixed(std::move(e));
}

ContinuousMixed to_continuous_mixed(const StrategyGrid& g, std::span<const double> weights) {
  if (g.scale != Scale::continuous) throw ValidationError("grid is not on the continuous scale");
  std::vector<ContinuousMixed::Entry> e;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (weights[i] > 0.0) e.push_back({g.deviations[i], weights[i]});
  }
  return ContinuousMixed(std::move(e));
}

BestResponse best_response(const ContinuousMixed& alpha, const StrategyGrid& g, const DieSpec& d,
                           const numerics::QuadratureSpec& q, unsigned threads) {
  if (g.scale != Scale::continuous) throw ValidationError("grid is not on the continuous scale");
  if (alpha.bins() != g.bins) throw DimensionError("strategy and grid have different bin counts");
  std::vector<double> value(g.size());
  parallel_for(g.size(), threads,
               [&](std::size_t j) { value[j] = payoff_mixed(alpha, g.deviations[j], d, q).value; });
  const auto it = std::min_element(value.begin(), value.end());
  return BestResponse{static_cast<std::size_t>(it - value.begin()), *it, g.size()};
}

double overplay_payoff_lower_bound(const DiscreteMixed& alpha, const TokenAllocation& y,
                                   const DieSpec& d) {
  const double n = static_cast<double>(y.total());
  const double unit = std::sqrt(static_cast<double>(d.bins()) * n) / d.min_prob();
  const double oy = overplay(y, d);
  double bound = 0.0;
  for (const auto& e : alpha.entries()) {
    const double w = (oy - overplay(e.strategy, d)) / unit;
    bound += e.weight * (w > 1.0 ? 0.5 - 1.0 / (w * w) : -0.5);
  }
  return bound;
}

BestResponse best_response(const DiscreteMixed& alpha, const StrategyGrid& g,
                           const DiscreteEngine& engine, unsigned threads) {
  if (g.scale != Scale::discrete) throw ValidationError("grid is not on the discrete scale");
  if (alpha.bins() != g.bins) throw DimensionError("strategy and grid have different bin counts");
  if (alpha[0].strategy.total() != g.tokens) {
    throw ValidationError("strategy and grid have different token totals");
  }
  const std::size_t n = g.size();
  std::vector<double> bound(n);
  for (std::size_t j = 0; j < n; ++j) {
    bound[j] = overplay_payoff_lower_bound(alpha, g.allocations[j], engine.die());
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return bound[a] < bound[b]; });

  // Margin covering quadrature error in the computed payoffs.
  const double margin = 1e-8;
  std::vector<double> value(n, std::numeric_limits<double>::infinity());
  double best = std::numeric_limits<double>::infinity();
  std::size_t done = 0;
  const std::size_t batch = 256;
  while (done < n && bound[order[done]] <= best + margin) {
    std::size_t end = done;
    while (end < n && end - done < batch && bound[order[end]] <= best + margin) ++end;
    parallel_for(end - done, threads, [&](std::size_t b) {
      const std::size_t j = order[done + b];
      value[j] = engine.payoff_mixed(alpha, g.allocations[j]).value;
    });
    for (std::size_t b = done; b < end; ++b) best = std::min(best, value[order[b]]);
    done = end;
  }
  const auto it = std::min_element(value.begin(), value.end());
  return BestResponse{static_cast<std::size_t>(it - value.begin()), *it, done};
}

KappaResult kappa(const DiscreteMixed& alpha, const DiscreteEngine& engine, unsigned threads) {
  const auto g = build_discrete_grid(engine.die(), alpha[0].strategy.total());
  const auto br = best_response(alpha, g, engine, threads);
  const auto counts = g.allocations[br.index].counts();
  return KappaResult{br.payoff, std::vector<std::int64_t>(counts.begin(), counts.end()), g.size(),
                     br.evaluated};
}

KappaResult kappa(const DiscreteMixed& alpha, const DieSpec& d, const numerics::QuadratureSpec& q,
                  unsigned threads) {
  DiscreteEngine engine(d, q);
  return kappa(alpha, engine, threads);
}

namespace {
double coordinate(const TokenAllocation& a, std::size_t i) { return static_cast<double>(a[i]); }
double coordinate(const Deviation& x, std::size_t i) { return x[i]; }
}  // namespace

template <class Pure>
double marginal_spacing(const Mixed<Pure>& alpha, std::size_t i, double delta) {
  if (i >= alpha.bins()) throw DimensionError("coordinate out of range");
  if (!(delta >= 0.0)) throw ValidationError("spacing delta must be nonnegative");
  std::vector<std::pair<double, double>> pts;
  pts.reserve(alpha.size());
  for (const auto& e : alpha.entries()) pts.emplace_back(coordinate(e.strategy, i), e.weight);
  std::sort(pts.begin(), pts.end());
  std::vector<double> prefix(pts.size() + 1, 0.0);
  for (std::size_t a = 0; a < pts.size(); ++a) prefix[a + 1] = prefix[a] + pts[a].second;
  // Lattice differences such as 0.15 - 0.05 land within rounding of delta.
  const double reach = delta * (1.0 + 1e-12) + 1e-12;
  double total = 0.0;
  for (const auto& [x, w] : pts) {
    const auto lo = std::lower_bound(pts.begin(), pts.end(), std::pair{x - reach, -1.0});
    const auto hi = std::upper_bound(pts.begin(), pts.end(),
                                     std::pair{x + reach, std::numeric_limits<double>::infinity()});
    total += w * (prefix[hi - pts.begin()] - prefix[lo - pts.begin()]);
  }
  return total;
}

template double marginal_spacing(const Mixed<TokenAllocation>&, std::size_t, double);
template double marginal_spacing(const Mixed<Deviation>&, std::size_t, double);

}  // namespace knockdown
