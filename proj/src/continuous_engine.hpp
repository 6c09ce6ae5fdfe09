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

// Payoffs for the continuous limit game: bin i of a player choosing m
// clears at m_i / p_i + Z_i / sqrt(p_i) with Z_i standard normal and shared
// by both players.

#include <vector>

#include "discrete_engine.hpp"
#include "game_model.hpp"
#include "numerics.hpp"

namespace knockdown {

class GaussianRace {
 public:
  GaussianRace(DieSpec die, std::vector<double> m);

  const DieSpec& die() const { return die_; }
  std::span<const double> levels() const { return m_; }
  std::size_t bins() const { return m_.size(); }

 private:
  DieSpec die_;
  std::vector<double> m_;
};

/// Pr[I = j] = int sqrt(p_j) phi(sqrt(p_j)(t - m_j/p_j)) prod_{l != j} Phi(sqrt(p_l)(t - m_l/p_l)) dt
/// over [min mu - T sigma_max, max mu + T sigma_max], T = q.truncation_sigmas.
LastBinDistribution last_bin_continuous(const GaussianRace& race,
                                        const numerics::QuadratureSpec& q = {});

/// K(x, y): exact coordinate equality counts as a tie in that bin.
Payoff payoff_continuous(const Deviation& x, const Deviation& y, const DieSpec& d,
                         const numerics::QuadratureSpec& q = {});

/// K(alpha, y) as the weighted mean of K(x, y) over the support of alpha.
Payoff payoff_mixed(const ContinuousMixed& alpha, const Deviation& y, const DieSpec& d,
                    const numerics::QuadratureSpec& q = {}, unsigned threads = 1);

}  // namespace knockdown
