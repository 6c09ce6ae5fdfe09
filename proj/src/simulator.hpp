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

// Monte Carlo oracle for both engines. Discrete trials roll the die one
// throw at a time; continuous trials draw one standard normal per bin.

#include <cstdint>
#include <vector>

#include "continuous_engine.hpp"
#include "discrete_engine.hpp"
#include "game_model.hpp"

namespace knockdown {

struct SimConfig {
  std::uint64_t trials = 1'000'000;
  std::uint64_t seed = 0;
  unsigned threads = 1;

  void validate() const;
};

// Trials in one independently seeded stream. Results depend on the seed and
// this constant only, never on the thread count.
inline constexpr std::uint64_t kTrialsPerStream = 1u << 16;

/// Seed of stream `chunk` derived from the master seed (splitmix64 finaliser).
std::uint64_t stream_seed(std::uint64_t master, std::uint64_t chunk);

/// Raw outcome counts; no coin flip is applied to ties. wins_a + wins_b +
/// ties == trials. Trials that hit the roll cap are counted as ties and also
/// reported in `overflow`.
struct MatchCounts {
  std::uint64_t wins_a = 0;
  std::uint64_t wins_b = 0;
  std::uint64_t ties = 0;
  std::uint64_t overflow = 0;
};

MatchCounts simulate_match(const TokenAllocation& a, const TokenAllocation& b, const DieSpec& d,
                           const SimConfig& c);
MatchCounts simulate_match(const Deviation& x, const Deviation& y, const DieSpec& d,
                           const SimConfig& c);

struct EmpiricalLastBin {
  std::vector<std::uint64_t> counts;
  std::uint64_t trials = 0;
  std::uint64_t overflow = 0;

  std::vector<double> frequencies() const;
};

EmpiricalLastBin simulate_last_bin(const PoissonRace& race, const SimConfig& c);
EmpiricalLastBin simulate_last_bin(const GaussianRace& race, const SimConfig& c);

/// Roll cap 100 n / min p used by discrete trials.
std::uint64_t roll_cap(std::int64_t tokens, const DieSpec& d);

}  // namespace knockdown
