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

// Equilibrium machinery: bounded strategy grids, antisymmetric payoff
// matrices, fictitious play with exploitability certificates, best
// responses and worst-case payoffs.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "continuous_engine.hpp"
#include "discrete_engine.hpp"
#include "game_model.hpp"
#include "numerics.hpp"

namespace knockdown {

/// Largest overplay an optimal n-token strategy can use:
/// (3 sqrt(3 + sqrt 5) sqrt(k n) + 1) / min p.
double overplay_limit(const DieSpec& d, std::int64_t n);

struct StrategyGrid {
  Scale scale = Scale::continuous;
  std::size_t bins = 0;
  std::int64_t tokens = 0;  // discrete only
  double spacing = 0.0;     // continuous lattice step h
  double bound = 0.0;       // per-coordinate deviation bound B (infinite if unset)
  std::vector<TokenAllocation> allocations;  // discrete points
  std::vector<Deviation> deviations;         // continuous points, h * lattice
  std::vector<std::vector<std::int64_t>> lattice;

  std::size_t size() const {
    return scale == Scale::discrete ? allocations.size() : deviations.size();
  }
};

/// Zero-sum lattice h Z^k with every coordinate in [-B, (k-1) B].
StrategyGrid build_continuous_grid(const DieSpec& d, double spacing, double bound);

/// Allocations of n tokens with overplay at most overplay_limit(d, n) and,
/// when `bound` is given, deviations (xi_i - p_i n)/sqrt(n) in [-B, (k-1) B].
StrategyGrid build_discrete_grid(const DieSpec& d, std::int64_t n,
                                 std::optional<double> bound = std::nullopt);

/// Square antisymmetric matrix; entry (i, j) is the payoff of grid point i
/// against grid point j.
class PayoffMatrix {
 public:
  PayoffMatrix() = default;
  explicit PayoffMatrix(std::size_t n) : n_(n), entries_(n * n, 0.0) {}

  std::size_t size() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return entries_[i * n_ + j]; }
  void set_pair(std::size_t i, std::size_t j, double v) {
    entries_[i * n_ + j] = v;
    entries_[j * n_ + i] = -v;
  }
  std::span<const double> row(std::size_t i) const { return {entries_.data() + i * n_, n_}; }
  std::span<const double> data() const { return entries_; }
  std::span<double> mutable_data() { return entries_; }

  double max_error = 0.0;

 private:
  std::size_t n_ = 0;
  std::vector<double> entries_;
};

/// Upper triangle from the engines, lower triangle by antisymmetry.
PayoffMatrix build_matrix(const StrategyGrid& g, const DieSpec& d,
                          const numerics::QuadratureSpec& q = {}, unsigned threads = 0);

/// Cache key covering die, grid parameters and quadrature settings.
std::string matrix_cache_key(const StrategyGrid& g, const DieSpec& d,
                             const numerics::QuadratureSpec& q);

/// Text dump: header, key, size, rows of %.17g entries, then an FNV-1a hash
/// of everything before it.
void save_matrix(const std::string& path, const std::string& key, const PayoffMatrix& m);

/// Returns nothing when the file is missing, has a different key, or fails
/// its integrity hash.
std::optional<PayoffMatrix> load_matrix(const std::string& path, const std::string& key);

struct SolveCheckpoint {
  std::int64_t iteration;
  double exploitability;  // best certified value so far
};

struct SolveResult {
  std::vector<double> weights;  // over grid points; zeros allowed
  double exploitability = 0.0;
  double value = 0.0;
  std::int64_t iterations = 0;
  bool converged = false;
  std::vector<SolveCheckpoint> checkpoints;
};

struct FictitiousPlayOptions {
  std::int64_t checkpoint_every = 1000;
  // Weights below this fraction of the largest weight are dropped from the
  // final strategy when the pruned strategy is still certified.
  double prune_fraction = 1e-3;
};

/// Simultaneous fictitious play on a symmetric zero-sum game starting from
/// the uniform strategy. Stops once the averaged strategy is certified
/// eps-exploitable or after max_iterations; always returns the best iterate.
SolveResult fictitious_play(const PayoffMatrix& p, double eps, std::int64_t max_iterations,
                            const FictitiousPlayOptions& options = {});

/// -min_j sum_i w_i P(i, j).
double exploitability(const PayoffMatrix& p, std::span<const double> weights);

DiscreteMixed to_discrete_mixed(const StrategyGrid& g, std::span<const double> weights);
ContinuousMixed to_continuous_mixed(const StrategyGrid& g, std::span<const double> weights);

struct BestResponse {
  std::size_t index = 0;  // into the grid
  double payoff = 0.0;    // K(alpha, grid[index]) from alpha's side
  std::size_t evaluated = 0;
};

/// Grid point minimising K(alpha, y); ties go to the earliest grid point.
BestResponse best_response(const ContinuousMixed& alpha, const StrategyGrid& g, const DieSpec& d,
                           const numerics::QuadratureSpec& q = {}, unsigned threads = 0);

/// Discrete variant. Responses whose overplay lower bound already keeps
/// K(alpha, y) above the best value found are skipped without changing the
/// result.
BestResponse best_response(const DiscreteMixed& alpha, const StrategyGrid& g,
                           const DiscreteEngine& engine, unsigned threads = 0);

/// Lower bound on K(alpha, y) from overplay gaps: each support point x with
/// overplay(y) - overplay(x) = w sqrt(k n) / min p, w > 1, contributes more
/// than 1/2 - 1/w^2, every other point at least -1/2.
double overplay_payoff_lower_bound(const DiscreteMixed& alpha, const TokenAllocation& y,
                                   const DieSpec& d);

struct KappaResult {
  double kappa = 0.0;
  std::vector<std::int64_t> response;
  std::size_t grid_size = 0;
  std::size_t evaluated = 0;
};

/// kappa_n = min over the overplay-bounded allocations y of K_n(alpha_n, y).
KappaResult kappa(const DiscreteMixed& alpha, const DieSpec& d,
                  const numerics::QuadratureSpec& q = {}, unsigned threads = 0);
KappaResult kappa(const DiscreteMixed& alpha, const DiscreteEngine& engine, unsigned threads = 0);

/// Pr[|x_i - y_i| <= delta] for x, y independent draws from alpha.
template <class Pure>
double marginal_spacing(const Mixed<Pure>& alpha, std::size_t coordinate, double delta);

}  // namespace knockdown
