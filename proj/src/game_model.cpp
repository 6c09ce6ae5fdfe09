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

#include "game_model.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

namespace knockdown {
namespace {

void require_bins(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw DimensionError(std::string(what) + ": bin count mismatch (" + std::to_string(a) +
                         " vs " + std::to_string(b) + ")");
  }
}

void compositions(std::int64_t remaining, std::size_t k, std::vector<std::int64_t>& prefix,
                  std::vector<std::vector<std::int64_t>>& out) {
  if (prefix.size() + 1 == k) {
    prefix.push_back(remaining);
    out.push_back(prefix);
    prefix.pop_back();
    return;
  }
  // Lexicographic order: the first coordinate increases slowest.
  for (std::int64_t v = 0; v <= remaining; ++v) {
    prefix.push_back(v);
    compositions(remaining - v, k, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

DieSpec::DieSpec(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.size() < 2) throw ValidationError("a die needs at least 2 bins");
  double sum = 0.0;
  for (double p : probs_) {
    if (!(p > 0.0) || !std::isfinite(p)) {
      throw ValidationError("die probabilities must be positive and finite");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > kDieSumTolerance) {
    throw ValidationError("die probabilities must sum to 1 (sum is " + std::to_string(sum) + ")");
  }
}

DieSpec DieSpec::uniform(std::size_t k) {
  return DieSpec(std::vector<double>(k, 1.0 / static_cast<double>(k)));
}

double DieSpec::min_prob() const { return *std::min_element(probs_.begin(), probs_.end()); }

bool DieSpec::is_uniform() const {
  return std::all_of(probs_.begin(), probs_.end(), [&](double p) { return p == probs_[0]; });
}

TokenAllocation::TokenAllocation(std::vector<std::int64_t> counts) : counts_(std::move(counts)) {
  if (counts_.empty()) throw ValidationError("allocation has no bins");
  for (auto c : counts_) {
    if (c < 0) throw ValidationError("token counts must be nonnegative");
    total_ += c;
  }
  if (total_ < 1) throw ValidationError("allocation must hold at least one token");
}

Deviation::Deviation(std::vector<double> x) : x_(std::move(x)) {
  if (x_.empty()) throw ValidationError("deviation has no bins");
  double sum = 0.0;
  for (double v : x_) {
    if (!std::isfinite(v)) throw ValidationError("deviation entries must be finite");
    sum += v;
  }
  if (std::abs(sum) > kDeviationSumTolerance) {
    throw ValidationError("deviation must sum to 0 (sum is " + std::to_string(sum) + ")");
  }
}

std::string to_string(Scale s) { return s == Scale::discrete ? "discrete" : "continuous"; }

template <class Pure>
Mixed<Pure>::Mixed(std::vector<Entry> entries) : entries_(std::move(entries)) {
  if (entries_.empty()) throw ValidationError("mixed strategy has empty support");
  const std::size_t k = entries_.front().strategy.bins();
  double sum = 0.0;
  for (const auto& e : entries_) {
    require_bins(e.strategy.bins(), k, "mixed strategy");
    if (!(e.weight > 0.0) || !std::isfinite(e.weight)) {
      throw ValidationError("mixed strategy weights must be positive");
    }
    sum += e.weight;
  }
  const double slack =
      kWeightSumTolerance + 4.0 * std::numeric_limits<double>::epsilon() * entries_.size();
  if (std::abs(sum - 1.0) > slack) {
    throw ValidationError("mixed strategy weights must sum to 1 (sum is " +
                          std::to_string(sum) + ")");
  }
  if constexpr (std::is_same_v<Pure, TokenAllocation>) {
    const auto n = entries_.front().strategy.total();
    for (const auto& e : entries_) {
      if (e.strategy.total() != n) {
        throw ValidationError("discrete mixed strategy mixes different token totals");
      }
    }
  }
  std::vector<const Pure*> order;
  order.reserve(entries_.size());
  for (const auto& e : entries_) order.push_back(&e.strategy);
  std::sort(order.begin(), order.end(), [](const Pure* a, const Pure* b) { return *a < *b; });
  for (std::size_t i = 1; i < order.size(); ++i) {
    if (*order[i] == *order[i - 1]) {
      throw ValidationError("mixed strategy support entries must be distinct");
    }
  }
}

template <class Pure>
Mixed<Pure> Mixed<Pure>::uniform(std::vector<Pure> points) {
  if (points.empty()) throw ValidationError("mixed strategy has empty support");
  const double w = 1.0 / static_cast<double>(points.size());
  std::vector<Entry> entries;
  entries.reserve(points.size());
  for (auto& p : points) entries.push_back(Entry{std::move(p), w});
  return Mixed(std::move(entries));
}

template class Mixed<TokenAllocation>;
template class Mixed<Deviation>;

double overplay(const TokenAllocation& a, const DieSpec& d) {
  require_bins(a.bins(), d.bins(), "overplay");
  const double n = static_cast<double>(a.total());
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < a.bins(); ++i) {
    worst = std::max(worst, static_cast<double>(a[i]) / d.prob(i) - n);
  }
  return worst;
}

ContinuousMixed undercut(const Deviation& x, double delta) {
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw ValidationError("undercut step must be positive");
  }
  const std::size_t k = x.bins();
  const double raise = static_cast<double>(k - 1) * delta;
  std::vector<Deviation> points;
  points.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    std::vector<double> v(x.values().begin(), x.values().end());
    for (std::size_t j = 0; j < k; ++j) v[j] += (j == i) ? raise : -delta;
    points.emplace_back(std::move(v));
  }
  return ContinuousMixed::uniform(std::move(points));
}

TokenAllocation round_deviation(const Deviation& x, std::int64_t n, const DieSpec& d) {
  require_bins(x.bins(), d.bins(), "round_deviation");
  if (n < 1) throw ValidationError("token total must be positive");
  const std::size_t k = x.bins();
  const double nn = static_cast<double>(n);
  const double root = std::sqrt(nn);
  std::vector<std::int64_t> counts(k);
  std::vector<double> remainder(k);
  std::int64_t assigned = 0;
  for (std::size_t i = 0; i < k; ++i) {
    double target = d.prob(i) * nn + x[i] * root;
    const double nearest = std::round(target);
    if (std::abs(target - nearest) < 1e-9) target = nearest;
    if (target < 0.0) {
      throw std::domain_error("rounded allocation would place a negative count in bin " +
                              std::to_string(i));
    }
    const double fl = std::floor(target);
    counts[i] = static_cast<std::int64_t>(fl);
    remainder[i] = target - fl;
    assigned += counts[i];
  }
  std::int64_t deficit = n - assigned;
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
  for (std::size_t r = 0; deficit > 0; r = (r + 1) % k, --deficit) ++counts[order[r]];
  // A negative deficit only arises from sum(x) slightly above zero; take the
  // surplus back from the smallest remainders.
  for (std::size_t r = k; deficit < 0; ++deficit) {
    do {
      r = (r == 0) ? k - 1 : r - 1;
    } while (counts[order[r]] == 0);
    --counts[order[r]];
  }
  return TokenAllocation(std::move(counts));
}

Deviation to_deviation(const TokenAllocation& a, const DieSpec& d) {
  require_bins(a.bins(), d.bins(), "to_deviation");
  const double n = static_cast<double>(a.total());
  const double root = std::sqrt(n);
  std::vector<double> x(a.bins());
  double sum = 0.0;
  for (std::size_t i = 0; i < a.bins(); ++i) {
    x[i] = (static_cast<double>(a[i]) - d.prob(i) * n) / root;
    sum += x[i];
  }
  // Remove floating residue so the zero-sum invariant holds comfortably.
  x.back() -= sum;
  return Deviation(std::move(x));
}

ContinuousMixed uniform_simplex_strategy(double bound, int resolution, std::size_t k) {
  if (!(bound > 0.0) || !std::isfinite(bound)) {
    throw ValidationError("simplex bound must be positive");
  }
  if (resolution < 1) throw ValidationError("simplex resolution must be at least 1");
  if (k < 2) throw ValidationError("simplex strategy needs k >= 2");
  const std::size_t dim = k - 1;
  const double r = resolution;
  const double cells = std::pow(r, static_cast<double>(dim));
  if (cells > 5e6) throw ValidationError("simplex quadrature too large");

  // Ordered coordinates r > u_1 > ... > u_d > 0 parametrise r times the simplex;
  // lambda_1 = (r - u_1)/r, lambda_i = (u_{i-1} - u_i)/r, lambda_k = u_d / r.
  std::vector<int> perm(dim);
  std::vector<int> corner(dim, 0);
  std::vector<double> u(dim);
  std::vector<Deviation> nodes;
  nodes.reserve(static_cast<std::size_t>(cells));
  const double side = static_cast<double>(k) * bound;

  auto emit = [&] {
    std::iota(perm.begin(), perm.end(), 0);
    do {
      for (std::size_t q = 0; q < dim; ++q) {
        u[perm[q]] = corner[perm[q]] +
                     static_cast<double>(dim - q) / static_cast<double>(dim + 1);
      }
      bool inside = true;
      for (std::size_t i = 0; i + 1 < dim; ++i) inside = inside && u[i] > u[i + 1];
      if (!inside) continue;
      std::vector<double> x(k);
      double prev = r;
      for (std::size_t i = 0; i < dim; ++i) {
        x[i] = -bound + side * (prev - u[i]) / r;
        prev = u[i];
      }
      x[dim] = -bound + side * prev / r;
      double sum = 0.0;
      for (double v : x) sum += v;
      x[dim] -= sum;
      nodes.emplace_back(std::move(x));
    } while (std::next_permutation(perm.begin(), perm.end()));
  };

  // Only nonincreasing corners can hold cells of the ordered region.
  std::function<void(std::size_t, int)> walk = [&](std::size_t i, int cap) {
    if (i == dim) {
      emit();
      return;
    }
    for (int c = 0; c <= cap; ++c) {
      corner[i] = c;
      walk(i + 1, c);
    }
  };
  walk(0, resolution - 1);
  return ContinuousMixed::uniform(std::move(nodes));
}

std::vector<TokenAllocation> all_allocations(std::int64_t n, std::size_t k) {
  if (k < 1) throw ValidationError("need at least one bin");
  if (n < 1) throw ValidationError("token total must be positive");
  std::vector<std::vector<std::int64_t>> raw;
  std::vector<std::int64_t> prefix;
  compositions(n, k, prefix, raw);
  std::vector<TokenAllocation> out;
  out.reserve(raw.size());
  for (auto& c : raw) out.emplace_back(std::move(c));
  return out;
}

DiscreteMixed uniform_allocations_at_least(std::int64_t n, std::size_t k, std::int64_t floor) {
  if (floor < 0) throw ValidationError("per-bin floor must be nonnegative");
  const std::int64_t spare = n - static_cast<std::int64_t>(k) * floor;
  if (spare < 0) throw ValidationError("per-bin floor exceeds n / k");
  if (k < 1) throw ValidationError("need at least one bin");
  std::vector<std::vector<std::int64_t>> base;
  std::vector<std::int64_t> prefix;
  compositions(spare, k, prefix, base);
  std::vector<TokenAllocation> points;
  points.reserve(base.size());
  for (auto& c : base) {
    for (auto& v : c) v += floor;
    points.emplace_back(std::move(c));
  }
  return DiscreteMixed::uniform(std::move(points));
}

}  // namespace knockdown
