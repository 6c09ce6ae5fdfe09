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

// Numerical probes of the structural bounds: change probability, local
// flatness of the last-bin law, overplay dominance, undercut smallness and
// marginal spacing.

#include <cstdint>
#include <vector>

#include "discrete_engine.hpp"
#include "game_model.hpp"
#include "numerics.hpp"

namespace knockdown {

/// max over all (h, i, j) of |Delta_h Delta_i Pr[I_M = j]| for the race
/// M = round_deviation(0, n), together with that maximum times n.
struct FlatnessReport {
  std::int64_t n = 0;
  std::vector<std::int64_t> counts;
  double max_abs = 0.0;
  double scaled = 0.0;  // max_abs * n
  std::size_t h = 0, i = 0, j = 0;
};

FlatnessReport flatness(const DieSpec& d, std::int64_t n, const numerics::QuadratureSpec& q = {});

/// Second difference through a shared engine cache.
double second_difference(const DiscreteEngine& engine, std::span<const std::int64_t> counts,
                         std::size_t h, std::size_t i, std::size_t j);

/// Allocation pair whose overplay gap is at least w sqrt(k n) / min p:
/// `xi` is the proportional allocation, `eta` overloads the first bin.
struct OverplayPair {
  TokenAllocation eta{std::vector<std::int64_t>{1}};
  TokenAllocation xi{std::vector<std::int64_t>{1}};
  double gap = 0.0;
  double required_gap = 0.0;
  double beat_probability = 0.0;  // Pr[eta beats xi]
  double bound = 0.0;             // 1 / w^2
};

OverplayPair overplay_pair(const DieSpec& d, std::int64_t n, double w,
                           const numerics::QuadratureSpec& q = {});

struct ChangeReport {
  double exact = 0.0;
  double bound = 0.0;
};

ChangeReport change_check(const PoissonRace& race, std::size_t i,
                          const numerics::QuadratureSpec& q = {});

/// |K(delta-undercut of x, y) - K(x, y)|.
double undercut_gap(const Deviation& x, const Deviation& y, double delta, const DieSpec& d,
                    const numerics::QuadratureSpec& q = {});

}  // namespace knockdown
