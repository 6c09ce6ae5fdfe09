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

#include "continuous_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "parallel.hpp"

namespace knockdown {

using numerics::normal_cdf;
using numerics::normal_pdf;

GaussianRace::GaussianRace(DieSpec die, std::vector<double> m)
    : die_(std::move(die)), m_(std::move(m)) {
  if (m_.size() != die_.bins()) throw DimensionError("race and die have different bin counts");
  for (double v : m_) {
    if (!std::isfinite(v)) throw ValidationError("race levels must be finite");
  }
}

LastBinDistribution last_bin_continuous(const GaussianRace& race,
                                        const numerics::QuadratureSpec& q) {
  const std::size_t k = race.bins();
  const auto& die = race.die();
  std::vector<double> mean(k);
  std::vector<double> root(k);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  double widest = 0.0;
  double narrowest = std::numeric_limits<double>::infinity();
  for (std::size_t l = 0; l < k; ++l) {
    root[l] = std::sqrt(die.prob(l));
    mean[l] = race.levels()[l] / die.prob(l);
    lo = std::min(lo, mean[l]);
    hi = std::max(hi, mean[l]);
    widest = std::max(widest, 1.0 / root[l]);
    narrowest = std::min(narrowest, 1.0 / root[l]);
  }
  lo -= q.truncation_sigmas * widest;
  hi += q.truncation_sigmas * widest;
  const int panels = static_cast<int>(std::clamp(std::ceil((hi - lo) / (2.0 * narrowest)), 4.0, 64.0));

  std::vector<double> cdf(k);
  std::vector<double> pdf(k);
  auto integrand = [&](double t, std::span<double> f) {
    for (std::size_t l = 0; l < k; ++l) {
      const double z = root[l] * (t - mean[l]);
      cdf[l] = normal_cdf(z);
      pdf[l] = root[l] * normal_pdf(z);
    }
    for (std::size_t j = 0; j < k; ++j) {
      double v = pdf[j];
      for (std::size_t l = 0; l < k; ++l) {
        if (l != j) v *= cdf[l];
      }
      f[j] = v;
    }
  };
  const auto r = numerics::integrate_multi(integrand, k, lo, hi, q, panels);
  return LastBinDistribution{r.values, r.error};
}

Payoff payoff_continuous(const Deviation& x, const Deviation& y, const DieSpec& d,
                         const numerics::QuadratureSpec& q) {
  if (x.bins() != y.bins() || x.bins() != d.bins()) {
    throw DimensionError("payoff_continuous: bin count mismatch");
  }
  const std::size_t k = x.bins();
  if (x == y) return Payoff{0.0, 0.0};
  std::vector<double> m(k);
  for (std::size_t i = 0; i < k; ++i) m[i] = std::max(x[i], y[i]);
  const auto lb = last_bin_continuous(GaussianRace(d, std::move(m)), q);
  double win = 0.0;
  double lose = 0.0;
  double tie = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    if (x[j] < y[j]) {
      win += lb.probs[j];
    } else if (x[j] > y[j]) {
      lose += lb.probs[j];
    } else {
      tie += lb.probs[j];
    }
  }
  return Payoff{0.5 * (win - lose) / (win + lose + tie), lb.error};
}

Payoff payoff_mixed(const ContinuousMixed& alpha, const Deviation& y, const DieSpec& d,
                    const numerics::QuadratureSpec& q, unsigned threads) {
  const auto& entries = alpha.entries();
  std::vector<Payoff> parts(entries.size());
  parallel_for(entries.size(), threads,
               [&](std::size_t i) { parts[i] = payoff_continuous(entries[i].strategy, y, d, q); });
  Payoff total;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    total.value += entries[i].weight * parts[i].value;
    total.error += entries[i].weight * parts[i].error;
  }
  return total;
}

}  // namespace knockdown
