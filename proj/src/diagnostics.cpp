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

#include "diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "continuous_engine.hpp"

namespace knockdown {

double second_difference(const DiscreteEngine& engine, std::span<const std::int64_t> counts,
                         std::size_t h, std::size_t i, std::size_t j) {
  const std::size_t k = counts.size();
  if (h >= k || i >= k || j >= k) throw DimensionError("bin index out of range");
  std::vector<std::int64_t> m(counts.begin(), counts.end());
  const double base = engine.last_bin(m).probs[j];
  ++m[h];
  const double plus_h = engine.last_bin(m).probs[j];
  ++m[i];
  const double plus_both = engine.last_bin(m).probs[j];
  --m[h];
  const double plus_i = engine.last_bin(m).probs[j];
  return base - plus_h - plus_i + plus_both;
}

FlatnessReport flatness(const DieSpec& d, std::int64_t n, const numerics::QuadratureSpec& q) {
  const auto m = round_deviation(Deviation(std::vector<double>(d.bins(), 0.0)), n, d);
  DiscreteEngine engine(d, q);
  FlatnessReport r;
  r.n = n;
  r.counts.assign(m.counts().begin(), m.counts().end());
  const std::size_t k = d.bins();
  for (std::size_t h = 0; h < k; ++h) {
    for (std::size_t i = h; i < k; ++i) {
      for (std::size_t j = 0; j < k; ++j) {
        const double v = std::abs(second_difference(engine, r.counts, h, i, j));
        if (v > r.max_abs) {
          r.max_abs = v;
          r.h = h;
          r.i = i;
          r.j = j;
        }
      }
    }
  }
  r.scaled = r.max_abs * static_cast<double>(n);
  return r;
}

OverplayPair overplay_pair(const DieSpec& d, std::int64_t n, double w,
                           const numerics::QuadratureSpec& q) {
  if (!(w > 0.0)) throw ValidationError("overplay multiple w must be positive");
  const std::size_t k = d.bins();
  const double nn = static_cast<double>(n);
  TokenAllocation xi = round_deviation(Deviation(std::vector<double>(k, 0.0)), n, d);
  const double required = w * std::sqrt(static_cast<double>(k) * nn) / d.min_prob();
  const auto first = static_cast<std::int64_t>(
      std::ceil(d.prob(0) * (nn + overplay(xi, d) + required) - 1e-9));
  if (first > n) {
    throw ValidationError("overplay gap " + std::to_string(required) +
                          " is not reachable with n = " + std::to_string(n));
  }
  // Spread the remaining tokens proportionally over the other bins.
  std::vector<std::int64_t> counts(k, 0);
  counts[0] = first;
  const std::int64_t rest = n - first;
  double others = 0.0;
  for (std::size_t i = 1; i < k; ++i) others += d.prob(i);
  std::int64_t placed = 0;
  std::vector<std::pair<double, std::size_t>> remainders;
  for (std::size_t i = 1; i < k; ++i) {
    const double share = static_cast<double>(rest) * d.prob(i) / others;
    counts[i] = static_cast<std::int64_t>(std::floor(share));
    placed += counts[i];
    remainders.emplace_back(-(share - std::floor(share)), i);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t r = 0; placed < rest; ++r, ++placed) ++counts[remainders[r % remainders.size()].second];

  OverplayPair out;
  out.eta = TokenAllocation(std::move(counts));
  out.xi = xi;
  out.gap = overplay(out.eta, d) - overplay(out.xi, d);
  out.required_gap = required;
  out.beat_probability = beats_discrete(out.eta, out.xi, d, q);
  out.bound = 1.0 / (w * w);
  return out;
}

ChangeReport change_check(const PoissonRace& race, std::size_t i, const numerics::QuadratureSpec& q) {
  return ChangeReport{change_probability(race, i, q), change_probability_bound(race, i)};
}

double undercut_gap(const Deviation& x, const Deviation& y, double delta, const DieSpec& d,
                    const numerics::QuadratureSpec& q) {
  const auto mix = undercut(x, delta);
  return std::abs(payoff_mixed(mix, y, d, q).value - payoff_continuous(x, y, d, q).value);
}

}  // namespace knockdown
