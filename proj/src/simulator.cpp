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

#include "simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "parallel.hpp"

namespace knockdown {
namespace {

class Stream {
 public:
  explicit Stream(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double normal() { return gauss_(engine_); }

  std::size_t roll(std::span<const double> cumulative) {
    const double u = uniform();
    for (std::size_t i = 0; i + 1 < cumulative.size(); ++i) {
      if (u < cumulative[i]) return i;
    }
    return cumulative.size() - 1;
  }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> gauss_;
};

std::vector<double> cumulative_probs(const DieSpec& d) {
  std::vector<double> c(d.bins());
  double acc = 0.0;
  for (std::size_t i = 0; i < d.bins(); ++i) {
    acc += d.prob(i);
    c[i] = acc;
  }
  return c;
}

// Splits `trials` into fixed-size streams and runs `chunk(stream, count, out)`
// on each, then sums the per-stream results in stream order.
template <class Result, class Chunk>
Result run_streams(const SimConfig& c, Result zero, Chunk&& chunk) {
  const std::uint64_t streams = (c.trials + kTrialsPerStream - 1) / kTrialsPerStream;
  std::vector<Result> parts(streams, zero);
  parallel_for(streams, c.threads, [&](std::size_t s) {
    const std::uint64_t begin = s * kTrialsPerStream;
    const std::uint64_t count = std::min(kTrialsPerStream, c.trials - begin);
    Stream rng(stream_seed(c.seed, s));
    chunk(rng, count, parts[s]);
  });
  Result total = zero;
  for (const auto& p : parts) total += p;
  return total;
}

struct MatchAccumulator {
  MatchCounts counts;
  MatchAccumulator& operator+=(const MatchAccumulator& o) {
    counts.wins_a += o.counts.wins_a;
    counts.wins_b += o.counts.wins_b;
    counts.ties += o.counts.ties;
    counts.overflow += o.counts.overflow;
    return *this;
  }
};

struct LastBinAccumulator {
  std::vector<std::uint64_t> counts;
  std::uint64_t overflow = 0;
  LastBinAccumulator& operator+=(const LastBinAccumulator& o) {
    for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += o.counts[i];
    overflow += o.overflow;
    return *this;
  }
};

}  // namespace

void SimConfig::validate() const {
  if (trials < 1) throw ValidationError("simulation needs at least one trial");
}

std::uint64_t stream_seed(std::uint64_t master, std::uint64_t chunk) {
  std::uint64_t z = master + 0x9e3779b97f4a7c15ull * (chunk + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

std::uint64_t roll_cap(std::int64_t tokens, const DieSpec& d) {
  return static_cast<std::uint64_t>(std::ceil(100.0 * static_cast<double>(std::max<std::int64_t>(tokens, 1)) / d.min_prob()));
}

std::vector<double> EmpiricalLastBin::frequencies() const {
  std::vector<double> f(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    f[i] = static_cast<double>(counts[i]) / static_cast<double>(trials);
  }
  return f;
}

MatchCounts simulate_match(const TokenAllocation& a, const TokenAllocation& b, const DieSpec& d,
                           const SimConfig& c) {
  c.validate();
  race_counts(a, b);
  if (a.bins() != d.bins()) throw DimensionError("allocation and die have different bin counts");
  const auto cumulative = cumulative_probs(d);
  const std::uint64_t cap = roll_cap(a.total(), d);
  const std::size_t k = d.bins();

  auto result = run_streams(c, MatchAccumulator{}, [&](Stream& rng, std::uint64_t count,
                                                       MatchAccumulator& out) {
    std::vector<std::int64_t> left_a(k);
    std::vector<std::int64_t> left_b(k);
    for (std::uint64_t trial = 0; trial < count; ++trial) {
      std::copy(a.counts().begin(), a.counts().end(), left_a.begin());
      std::copy(b.counts().begin(), b.counts().end(), left_b.begin());
      std::int64_t total_a = a.total();
      std::int64_t total_b = b.total();
      std::uint64_t rolls = 0;
      // Both players see the same throws; the first to clear wins, and
      // clearing on the same throw is a tie.
      while (total_a > 0 && total_b > 0 && rolls < cap) {
        const std::size_t face = rng.roll(cumulative);
        ++rolls;
        if (left_a[face] > 0) {
          --left_a[face];
          --total_a;
        }
        if (left_b[face] > 0) {
          --left_b[face];
          --total_b;
        }
      }
      if (total_a > 0 && total_b > 0) {
        ++out.counts.overflow;
        ++out.counts.ties;
      } else if (total_a == 0 && total_b == 0) {
        ++out.counts.ties;
      } else if (total_a == 0) {
        ++out.counts.wins_a;
      } else {
        ++out.counts.wins_b;
      }
    }
  });
  return result.counts;
}

MatchCounts simulate_match(const Deviation& x, const Deviation& y, const DieSpec& d,
                           const SimConfig& c) {
  c.validate();
  if (x.bins() != d.bins() || y.bins() != d.bins()) {
    throw DimensionError("deviation and die have different bin counts");
  }
  const std::size_t k = d.bins();
  std::vector<double> sigma(k);
  for (std::size_t i = 0; i < k; ++i) sigma[i] = 1.0 / std::sqrt(d.prob(i));

  auto result = run_streams(c, MatchAccumulator{}, [&](Stream& rng, std::uint64_t count,
                                                       MatchAccumulator& out) {
    for (std::uint64_t trial = 0; trial < count; ++trial) {
      double tx = -std::numeric_limits<double>::infinity();
      double ty = tx;
      for (std::size_t i = 0; i < k; ++i) {
        const double noise = rng.normal() * sigma[i];
        tx = std::max(tx, x[i] / d.prob(i) + noise);
        ty = std::max(ty, y[i] / d.prob(i) + noise);
      }
      if (tx < ty) {
        ++out.counts.wins_a;
      } else if (ty < tx) {
        ++out.counts.wins_b;
      } else {
        ++out.counts.ties;
      }
    }
  });
  return result.counts;
}

EmpiricalLastBin simulate_last_bin(const PoissonRace& race, const SimConfig& c) {
  c.validate();
  const auto& d = race.die();
  const std::size_t k = race.bins();
  const auto cumulative = cumulative_probs(d);
  std::int64_t tokens = 0;
  for (auto m : race.counts()) tokens += m;
  const std::uint64_t cap = roll_cap(tokens, d);

  LastBinAccumulator zero{std::vector<std::uint64_t>(k, 0), 0};
  auto result = run_streams(c, zero, [&](Stream& rng, std::uint64_t count, LastBinAccumulator& out) {
    std::vector<std::int64_t> left(k);
    for (std::uint64_t trial = 0; trial < count; ++trial) {
      if (tokens == 0) {
        ++out.counts[rng.roll(cumulative) % k];
        continue;
      }
      std::copy(race.counts().begin(), race.counts().end(), left.begin());
      std::int64_t remaining = tokens;
      std::size_t last = 0;
      std::uint64_t rolls = 0;
      while (remaining > 0 && rolls < cap) {
        const std::size_t face = rng.roll(cumulative);
        ++rolls;
        if (left[face] > 0) {
          --left[face];
          --remaining;
          last = face;
        }
      }
      if (remaining > 0) {
        ++out.overflow;
        continue;
      }
      ++out.counts[last];
    }
  });
  EmpiricalLastBin e{std::move(result.counts), 0, result.overflow};
  for (auto v : e.counts) e.trials += v;
  return e;
}

EmpiricalLastBin simulate_last_bin(const GaussianRace& race, const SimConfig& c) {
  c.validate();
  const auto& d = race.die();
  const std::size_t k = race.bins();
  std::vector<double> mean(k);
  std::vector<double> sigma(k);
  for (std::size_t i = 0; i < k; ++i) {
    mean[i] = race.levels()[i] / d.prob(i);
    sigma[i] = 1.0 / std::sqrt(d.prob(i));
  }
  LastBinAccumulator zero{std::vector<std::uint64_t>(k, 0), 0};
  auto result = run_streams(c, zero, [&](Stream& rng, std::uint64_t count, LastBinAccumulator& out) {
    for (std::uint64_t trial = 0; trial < count; ++trial) {
      std::size_t best = 0;
      double top = -std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < k; ++i) {
        const double t = mean[i] + sigma[i] * rng.normal();
        if (t > top) {  // strict: ties keep the lowest index
          top = t;
          best = i;
        }
      }
      ++out.counts[best];
    }
  });
  EmpiricalLastBin e{std::move(result.counts), 0, 0};
  for (auto v : e.counts) e.trials += v;
  return e;
}

}  // namespace knockdown
