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

#include "discrete_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

namespace knockdown {

using numerics::poisson_pmf;
using numerics::poisson_tail;

namespace {

constexpr double kNegligible = 1e-17;

// Rigorous upper bound on Pr[Poisson(lambda) < m] for lambda > m - 1.
double lower_sum_bound(double lambda, std::int64_t m) {
  const double top = static_cast<double>(m - 1);
  if (lambda <= top) return 1.0;
  return poisson_pmf(lambda, m - 1) * lambda / (lambda - top);
}

// Rigorous upper bound on Pr[Poisson(lambda) >= m] for lambda < m + 1.
double upper_sum_bound(double lambda, std::int64_t m) {
  const double next = static_cast<double>(m + 1);
  if (lambda >= next) return 1.0;
  return poisson_pmf(lambda, m) / (1.0 - lambda / next);
}

// Time by which bin l has been hit at least m times, except with probability
// below kNegligible.
double clearance_upper(std::int64_t m, double p) {
  const double mm = static_cast<double>(m);
  for (double c = 8.0;; c *= 1.5) {
    const double t = (mm + c * std::sqrt(mm) + c * c) / p;
    if (lower_sum_bound(p * t, m) < kNegligible) return t;
  }
}

// Time before which bin l has been hit fewer than m times, except with
// probability below kNegligible. Zero when no such cut exists.
double clearance_lower(std::int64_t m, double p) {
  if (m < 1) return 0.0;
  const double mm = static_cast<double>(m);
  for (double c = 8.0; c < 1e6; c *= 1.5) {
    const double t = (mm - c * std::sqrt(mm)) / p;
    if (t <= 0.0) return 0.0;
    if (upper_sum_bound(p * t, m) < kNegligible) return t;
  }
  return 0.0;
}

}  // namespace

double LastBinDistribution::sum() const {
  double s = 0.0;
  for (double v : probs) s += v;
  return s;
}

PoissonRace::PoissonRace(DieSpec die, std::vector<std::int64_t> counts)
    : die_(std::move(die)), counts_(std::move(counts)) {
  if (counts_.size() != die_.bins()) {
    throw DimensionError("race has " + std::to_string(counts_.size()) + " bins but the die has " +
                         std::to_string(die_.bins()));
  }
  for (auto c : counts_) {
    if (c < 0) throw ValidationError("race counts must be nonnegative");
  }
}

PoissonRace PoissonRace::incremented(std::size_t i, std::int64_t by) const {
  auto c = counts_;
  c.at(i) += by;
  return PoissonRace(die_, std::move(c));
}

LastBinDistribution last_bin_discrete(const PoissonRace& race, const numerics::QuadratureSpec& q) {
  const std::size_t k = race.bins();
  const auto counts = race.counts();
  const auto& die = race.die();

  std::vector<std::size_t> active;
  for (std::size_t l = 0; l < k; ++l) {
    if (counts[l] > 0) active.push_back(l);
  }
  LastBinDistribution out{std::vector<double>(k, 0.0), 0.0};
  if (active.empty()) {
    std::fill(out.probs.begin(), out.probs.end(), 1.0 / static_cast<double>(k));
    return out;
  }
  if (active.size() == 1) {
    out.probs[active.front()] = 1.0;
    return out;
  }

  double hi = 0.0;
  double lo = 0.0;
  double spread = std::numeric_limits<double>::infinity();
  for (auto l : active) {
    const double p = die.prob(l);
    hi = std::max(hi, clearance_upper(counts[l], p));
    lo = std::max(lo, clearance_lower(counts[l] - 1, p));
    spread = std::min(spread, std::sqrt(static_cast<double>(counts[l])) / p);
  }
  if (!(lo < hi)) lo = 0.0;
  const int panels =
      static_cast<int>(std::clamp(std::ceil((hi - lo) / (2.0 * spread)), 4.0, 64.0));

  const std::size_t na = active.size();
  std::vector<double> tails(na);
  std::vector<double> pmfs(na);
  auto integrand = [&](double t, std::span<double> f) {
    for (std::size_t a = 0; a < na; ++a) {
      const double p = die.prob(active[a]);
      const double lambda = p * t;
      tails[a] = poisson_tail(lambda, counts[active[a]]);
      pmfs[a] = p * poisson_pmf(lambda, counts[active[a]] - 1);
    }
    for (std::size_t a = 0; a < na; ++a) {
      double v = pmfs[a];
      for (std::size_t b = 0; b < na; ++b) {
        if (b != a) v *= tails[b];
      }
      f[a] = v;
    }
  };
  const auto r = numerics::integrate_multi(integrand, na, lo, hi, q, panels);
  for (std::size_t a = 0; a < na; ++a) out.probs[active[a]] = r.values[a];
  out.error = r.error;
  return out;
}

std::vector<std::int64_t> race_counts(const TokenAllocation& a, const TokenAllocation& b) {
  if (a.bins() != b.bins()) throw DimensionError("allocations have different bin counts");
  if (a.total() != b.total()) throw ValidationError("allocations have different token totals");
  std::vector<std::int64_t> m(a.bins());
  for (std::size_t i = 0; i < a.bins(); ++i) m[i] = std::max(a[i], b[i]);
  return m;
}

double payoff_from_last_bin(std::span<const std::int64_t> a, std::span<const std::int64_t> b,
                            std::span<const double> last_bin) {
  double win = 0.0;
  double lose = 0.0;
  double tie = 0.0;
  for (std::size_t j = 0; j < last_bin.size(); ++j) {
    if (a[j] < b[j]) {
      win += last_bin[j];
    } else if (a[j] > b[j]) {
      lose += last_bin[j];
    } else {
      tie += last_bin[j];
    }
  }
  const double total = win + lose + tie;
  return 0.5 * (win - lose) / total;
}

DiscreteEngine::DiscreteEngine(DieSpec die, numerics::QuadratureSpec q)
    : die_(std::move(die)), q_(q) {
  q_.validate();
  // Rank bins by probability so bins with equal p share a rank.
  const std::size_t k = die_.bins();
  prob_rank_.resize(k);
  for (std::size_t i = 0; i < k; ++i) {
    prob_rank_[i] = static_cast<std::size_t>(std::count_if(
        die_.probs().begin(), die_.probs().end(), [&](double p) { return p < die_.prob(i); }));
  }
}

std::size_t DiscreteEngine::KeyHash::operator()(const std::vector<std::int64_t>& v) const noexcept {
  std::size_t h = 1469598103934665603ull;
  for (auto x : v) {
    h ^= static_cast<std::size_t>(x) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  }
  return h;
}

LastBinDistribution DiscreteEngine::last_bin(std::span<const std::int64_t> counts) const {
  const std::size_t k = die_.bins();
  if (counts.size() != k) throw DimensionError("race bin count does not match the die");
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (prob_rank_[a] != prob_rank_[b]) return prob_rank_[a] < prob_rank_[b];
    return counts[a] < counts[b];
  });
  std::vector<std::int64_t> key(k);
  for (std::size_t r = 0; r < k; ++r) key[r] = counts[order[r]];

  auto unpermute = [&](const LastBinDistribution& canonical) {
    LastBinDistribution out{std::vector<double>(k), canonical.error};
    for (std::size_t r = 0; r < k; ++r) out.probs[order[r]] = canonical.probs[r];
    return out;
  };
  {
    std::lock_guard lock(mutex_);
    if (auto it = cache_.find(key); it != cache_.end()) return unpermute(it->second);
  }
  std::vector<double> canonical_probs(k);
  for (std::size_t r = 0; r < k; ++r) canonical_probs[r] = die_.prob(order[r]);
  auto computed = last_bin_discrete(PoissonRace(DieSpec(std::move(canonical_probs)), key), q_);
  {
    std::lock_guard lock(mutex_);
    cache_.emplace(std::move(key), computed);
  }
  return unpermute(computed);
}

Payoff DiscreteEngine::payoff(const TokenAllocation& a, const TokenAllocation& b) const {
  const auto m = race_counts(a, b);
  const auto lb = last_bin(m);
  return Payoff{payoff_from_last_bin(a.counts(), b.counts(), lb.probs), lb.error};
}

double DiscreteEngine::beats(const TokenAllocation& a, const TokenAllocation& b) const {
  return 0.5 + payoff(a, b).value;
}

Payoff DiscreteEngine::payoff_mixed(const DiscreteMixed& alpha, const TokenAllocation& y) const {
  Payoff total;
  for (const auto& e : alpha.entries()) {
    const auto p = payoff(e.strategy, y);
    total.value += e.weight * p.value;
    total.error += e.weight * p.error;
  }
  return total;
}

std::size_t DiscreteEngine::cache_size() const {
  std::lock_guard lock(mutex_);
  return cache_.size();
}

double beats_discrete(const TokenAllocation& a, const TokenAllocation& b, const DieSpec& d,
                      const numerics::QuadratureSpec& q) {
  return 0.5 + payoff_discrete(a, b, d, q).value;
}

Payoff payoff_discrete(const TokenAllocation& a, const TokenAllocation& b, const DieSpec& d,
                       const numerics::QuadratureSpec& q) {
  if (a.bins() != d.bins()) throw DimensionError("allocation and die have different bin counts");
  const auto lb = last_bin_discrete(PoissonRace(d, race_counts(a, b)), q);
  return Payoff{payoff_from_last_bin(a.counts(), b.counts(), lb.probs), lb.error};
}

double change_probability_bound(const PoissonRace& race, std::size_t i) {
  const auto m = race.counts()[i];
  if (m < 1) throw ValidationError("change bound needs M_i >= 1");
  return 1.0 / std::sqrt(2.0 * std::numbers::pi * static_cast<double>(m));
}

double change_probability(const PoissonRace& race, std::size_t i,
                          const numerics::QuadratureSpec& q) {
  const auto before = last_bin_discrete(race, q);
  const auto after = last_bin_discrete(race.incremented(i), q);
  return after.probs[i] - before.probs[i];
}

double second_difference(const PoissonRace& race, std::size_t h, std::size_t i, std::size_t j,
                         const numerics::QuadratureSpec& q) {
  if (h >= race.bins() || i >= race.bins() || j >= race.bins()) {
    throw DimensionError("bin index out of range");
  }
  const double base = last_bin_discrete(race, q).probs[j];
  const double plus_h = last_bin_discrete(race.incremented(h), q).probs[j];
  const double plus_i = last_bin_discrete(race.incremented(i), q).probs[j];
  const double plus_both = last_bin_discrete(race.incremented(h).incremented(i), q).probs[j];
  return base - plus_h - plus_i + plus_both;
}

}  // namespace knockdown
