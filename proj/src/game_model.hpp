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

// Domain types for the token race game and the pure-strategy transforms.

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace knockdown {

class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DimensionError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

inline constexpr double kDieSumTolerance = 1e-12;
inline constexpr double kDeviationSumTolerance = 1e-9;
inline constexpr double kWeightSumTolerance = 1e-12;

/// Loaded k-sided die: k >= 2 strictly positive face probabilities.
class DieSpec {
 public:
  explicit DieSpec(std::vector<double> probs);
  static DieSpec uniform(std::size_t k);

  std::size_t bins() const { return probs_.size(); }
  std::span<const double> probs() const { return probs_; }
  double prob(std::size_t i) const { return probs_[i]; }
  double min_prob() const;
  bool is_uniform() const;

  friend bool operator==(const DieSpec&, const DieSpec&) = default;

 private:
  std::vector<double> probs_;
};

/// n tokens arranged into k bins.
class TokenAllocation {
 public:
  explicit TokenAllocation(std::vector<std::int64_t> counts);

  std::size_t bins() const { return counts_.size(); }
  std::int64_t total() const { return total_; }
  std::span<const std::int64_t> counts() const { return counts_; }
  std::int64_t operator[](std::size_t i) const { return counts_[i]; }

  friend bool operator==(const TokenAllocation& a, const TokenAllocation& b) {
    return a.counts_ == b.counts_;
  }
  friend auto operator<=>(const TokenAllocation& a, const TokenAllocation& b) {
    return a.counts_ <=> b.counts_;
  }

 private:
  std::vector<std::int64_t> counts_;
  std::int64_t total_ = 0;
};

/// Root-n scaled departure from the proportional allocation; sums to zero.
class Deviation {
 public:
  explicit Deviation(std::vector<double> x);

  std::size_t bins() const { return x_.size(); }
  std::span<const double> values() const { return x_; }
  double operator[](std::size_t i) const { return x_[i]; }

  friend bool operator==(const Deviation& a, const Deviation& b) { return a.x_ == b.x_; }
  friend auto operator<=>(const Deviation& a, const Deviation& b) {
    return a.x_ <=> b.x_;
  }

 private:
  std::vector<double> x_;
};

enum class Scale { discrete, continuous };

std::string to_string(Scale s);

/// Finite mixture of pure strategies on a single scale. Weights are
/// positive and sum to one; support points are pairwise distinct.
template <class Pure>
class Mixed {
 public:
  struct Entry {
    Pure strategy;
    double weight;
  };

  explicit Mixed(std::vector<Entry> entries);
  static Mixed point_mass(Pure p) { return Mixed({Entry{std::move(p), 1.0}}); }
  static Mixed uniform(std::vector<Pure> points);

  std::size_t size() const { return entries_.size(); }
  std::size_t bins() const { return entries_.front().strategy.bins(); }
  const std::vector<Entry>& entries() const { return entries_; }
  const Entry& operator[](std::size_t i) const { return entries_[i]; }

 private:
  std::vector<Entry> entries_;
};

using DiscreteMixed = Mixed<TokenAllocation>;
using ContinuousMixed = Mixed<Deviation>;

extern template class Mixed<TokenAllocation>;
extern template class Mixed<Deviation>;

/// max_i (xi_i / p_i - n).
double overplay(const TokenAllocation& a, const DieSpec& d);

/// Uniform k-point mixture: one coordinate raised by (k-1) delta, the rest
/// lowered by delta.
ContinuousMixed undercut(const Deviation& x, double delta);

/// Token allocation nearest p_i n + x_i sqrt(n): floors plus largest-remainder
/// apportionment, ties to the lowest bin index.
TokenAllocation round_deviation(const Deviation& x, std::int64_t n, const DieSpec& d);

/// Deviation (xi_i - p_i n) / sqrt(n) of a token allocation.
Deviation to_deviation(const TokenAllocation& a, const DieSpec& d);

/// Equal-weight quadrature of the uniform law on {x : sum x = 0, x_i >= -bound}.
/// Nodes are the centroids of the r^(k-1) cells of the Freudenthal
/// subdivision of the simplex at resolution r. When r is a multiple of k the
/// hyperplanes x_i = 0 fall on cell faces.
ContinuousMixed uniform_simplex_strategy(double bound, int resolution, std::size_t k);

/// Uniform over all allocations of n tokens with at least `floor` in every bin.
DiscreteMixed uniform_allocations_at_least(std::int64_t n, std::size_t k, std::int64_t floor);

/// All compositions of n into k nonnegative parts, lexicographic order.
std::vector<TokenAllocation> all_allocations(std::int64_t n, std::size_t k);

}  // namespace knockdown
