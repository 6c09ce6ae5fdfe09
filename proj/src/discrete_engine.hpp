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

#pragma once

// Exact last-bin probabilities and payoffs for the n-token game, computed in
// the Poissonized form where bin l is hit by an independent rate-p_l process.

#include <cstddef>
#include <cstdint>
#include <mutex>
#include <unordered_map>
#include <vector>

#include "game_model.hpp"
#include "numerics.hpp"

namespace knockdown {

struct LastBinDistribution {
  std::vector<double> probs;
  double error = 0.0;  // quadrature error estimate (max over bins)

  double sum() const;
};

struct Payoff {
  double value = 0.0;
  double error = 0.0;
};

/// Per-bin token counts raced against one die. Usually the componentwise
/// max of two allocations.
class PoissonRace {
 public:
  PoissonRace(DieSpec die, std::vector<std::int64_t> counts);

  const DieSpec& die() const { return die_; }
  std::span<const std::int64_t> counts() const { return counts_; }
  std::size_t bins() const { return counts_.size(); }
  PoissonRace incremented(std::size_t i, std::int64_t by = 1) const;

 private:
  DieSpec die_;
  std::vector<std::int64_t> counts_;
};

/// Pr[I = j] = int_0^inf p_j pmf(p_j t, M_j - 1) prod_{l != j} Pr[Poisson(p_l t) >= M_l] dt.
/// A bin with no tokens clears at time 0 and is never last. The all-zero
/// race is degenerate; it reports the uniform distribution.
LastBinDistribution last_bin_discrete(const PoissonRace& race,
                                      const numerics::QuadratureSpec& q = {});

/// Componentwise max of two allocations; checks matching n and k.
std::vector<std::int64_t> race_counts(const TokenAllocation& a, const TokenAllocation& b);

/// K_n(a, b) on the half-difference scale from a precomputed last-bin law.
double payoff_from_last_bin(std::span<const std::int64_t> a, std::span<const std::int64_t> b,
                            std::span<const double> last_bin);

/// Caches last-bin laws by race, folding together races that differ by a
/// relabelling of bins with equal probabilities. Thread-safe.
class DiscreteEngine {
 public:
  explicit DiscreteEngine(DieSpec die, numerics::QuadratureSpec q = {});

  const DieSpec& die() const { return die_; }
  const numerics::QuadratureSpec& quadrature() const { return q_; }

  LastBinDistribution last_bin(std::span<const std::int64_t> counts) const;
  Payoff payoff(const TokenAllocation& a, const TokenAllocation& b) const;
  double beats(const TokenAllocation& a, const TokenAllocation& b) const;
  /// Weighted payoff of a mixed strategy against a pure response.
  Payoff payoff_mixed(const DiscreteMixed& alpha, const TokenAllocation& y) const;

  std::size_t cache_size() const;

 private:
  struct KeyHash {
    std::size_t operator()(const std::vector<std::int64_t>& v) const noexcept;
  };

  DieSpec die_;
  numerics::QuadratureSpec q_;
  std::vector<std::size_t> prob_rank_;
  mutable std::mutex mutex_;
  mutable std::unordered_map<std::vector<std::int64_t>, LastBinDistribution, KeyHash> cache_;
};

/// Pr[a beats b] with ties split evenly.
double beats_discrete(const TokenAllocation& a, const TokenAllocation& b, const DieSpec& d,
                      const numerics::QuadratureSpec& q = {});

/// K_n(a, b) = Pr[a beats b] - 1/2.
Payoff payoff_discrete(const TokenAllocation& a, const TokenAllocation& b, const DieSpec& d,
                       const numerics::QuadratureSpec& q = {});

/// Analytic bound 1/sqrt(2 pi M_i) on Pr[the last bin changes] when M_i grows by one.
double change_probability_bound(const PoissonRace& race, std::size_t i);

/// Exact Pr[the last bin changes] when M_i grows by one, i.e. Pr[I_{M+e_i} = i] - Pr[I_M = i].
double change_probability(const PoissonRace& race, std::size_t i,
                          const numerics::QuadratureSpec& q = {});

/// Delta_h Delta_i Pr[I_M = j] from four last-bin evaluations.
double second_difference(const PoissonRace& race, std::size_t h, std::size_t i, std::size_t j,
                         const numerics::QuadratureSpec& q = {});

}  // namespace knockdown
