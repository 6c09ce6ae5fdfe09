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

#include "knockdown/knockdown.h"

#include <cmath>
#include <cstring>
#include <exception>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "continuous_engine.hpp"
#include "diagnostics.hpp"
#include "discrete_engine.hpp"
#include "game_model.hpp"
#include "numerics.hpp"
#include "simulator.hpp"
#include "solver.hpp"
#include "strategy_io.hpp"

namespace kd = knockdown;

struct kd_die {
  kd::DieSpec spec;
};

struct kd_strategy {
  kd::AnyMixed mixed;
};

struct kd_grid {
  kd::StrategyGrid grid;
};

struct kd_matrix {
  kd::PayoffMatrix matrix;
};

struct kd_solution {
  kd::SolveResult result;
  kd::AnyMixed strategy;
};

namespace {

thread_local std::string g_last_error;

kd_status fail(kd_status s, const char* what) {
  g_last_error = what;
  return s;
}

template <class F>
kd_status guarded(F&& body) {
  try {
    body();
    return KD_OK;
  } catch (const kd::numerics::QuadratureError& e) {
    return fail(KD_ERR_QUADRATURE, e.what());
  } catch (const kd::DimensionError& e) {
    return fail(KD_ERR_DIMENSION, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(KD_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::domain_error& e) {
    return fail(KD_ERR_DOMAIN, e.what());
  } catch (const kd::IoError& e) {
    return fail(KD_ERR_IO, e.what());
  } catch (const std::exception& e) {
    return fail(KD_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(KD_ERR_INTERNAL, "unknown exception");
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

void require_index(bool ok, const char* what) {
  if (!ok) throw kd::DimensionError(what);
}

kd::numerics::QuadratureSpec quad(const kd_quadrature* q) {
  kd::numerics::QuadratureSpec s;
  if (q) {
    s.abs_tolerance = q->abs_tolerance;
    s.max_subdivisions = q->max_subdivisions;
    s.truncation_sigmas = q->truncation_sigmas;
  }
  s.validate();
  return s;
}

void check_k(const kd_die* die, size_t k) {
  require(die != nullptr, "die is null");
  if (k != die->spec.bins()) {
    throw kd::DimensionError("vector length " + std::to_string(k) + " does not match die with " +
                             std::to_string(die->spec.bins()) + " bins");
  }
}

std::int64_t as_count(double v) {
  if (!std::isfinite(v) || v != std::floor(v) || v < 0 || v > 9.0e15) {
    throw kd::ValidationError("token counts must be non-negative integers");
  }
  return static_cast<std::int64_t>(v);
}

std::vector<std::int64_t> counts_of(const double* p, size_t k) {
  require(p != nullptr, "counts pointer is null");
  std::vector<std::int64_t> c(k);
  for (size_t i = 0; i < k; ++i) c[i] = as_count(p[i]);
  return c;
}

kd::TokenAllocation allocation_of(const double* p, size_t k) {
  return kd::TokenAllocation(counts_of(p, k));
}

std::vector<double> reals_of(const double* p, size_t k) {
  require(p != nullptr, "vector pointer is null");
  return std::vector<double>(p, p + k);
}

kd::Deviation deviation_of(const double* p, size_t k) { return kd::Deviation(reals_of(p, k)); }

void copy_out(const std::vector<double>& v, double* out) {
  if (out) std::memcpy(out, v.data(), v.size() * sizeof(double));
}

template <class T, class... A>
T* make(A&&... a) {
  return new T{std::forward<A>(a)...};
}

}  // namespace

extern "C" {

const char* kd_version(void) { return "0.1.0"; }

const char* kd_last_error(void) { return g_last_error.c_str(); }

const char* kd_status_name(kd_status s) {
  switch (s) {
    case KD_OK: return "ok";
    case KD_ERR_INVALID_ARGUMENT: return "invalid argument";
    case KD_ERR_DIMENSION: return "dimension mismatch";
    case KD_ERR_DOMAIN: return "domain error";
    case KD_ERR_QUADRATURE: return "quadrature failure";
    case KD_ERR_IO: return "i/o error";
    case KD_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

kd_quadrature kd_quadrature_default(void) {
  kd::numerics::QuadratureSpec s;
  return kd_quadrature{s.abs_tolerance, s.max_subdivisions, s.truncation_sigmas};
}

kd_status kd_die_create(const double* probs, size_t k, kd_die** out) {
  return guarded([&] {
    require(out != nullptr, "output pointer is null");
    *out = make<kd_die>(kd::DieSpec(reals_of(probs, k)));
  });
}

kd_status kd_die_parse(const char* text, kd_die** out) {
  return guarded([&] {
    require(text != nullptr && out != nullptr, "null argument");
    *out = make<kd_die>(kd::parse_die(text));
  });
}

void kd_die_destroy(kd_die* die) { delete die; }

size_t kd_die_bins(const kd_die* die) { return die ? die->spec.bins() : 0; }

double kd_die_prob(const kd_die* die, size_t i) {
  if (!die || i >= die->spec.bins()) return std::nan("");
  return die->spec.prob(i);
}

kd_status kd_overplay(const kd_die* die, const double* counts, size_t k, double* out) {
  return guarded([&] {
    check_k(die, k);
    require(out != nullptr, "output pointer is null");
    *out = kd::overplay(allocation_of(counts, k), die->spec);
  });
}

kd_status kd_overplay_limit(const kd_die* die, int64_t n, double* out) {
  return guarded([&] {
    require(die != nullptr && out != nullptr, "null argument");
    *out = kd::overplay_limit(die->spec, n);
  });
}

kd_status kd_round_deviation(const kd_die* die, const double* x, size_t k, int64_t n,
                             double* out_counts) {
  return guarded([&] {
    check_k(die, k);
    require(out_counts != nullptr, "output pointer is null");
    auto a = kd::round_deviation(deviation_of(x, k), n, die->spec);
    for (size_t i = 0; i < k; ++i) out_counts[i] = static_cast<double>(a[i]);
  });
}

kd_status kd_strategy_create(kd_scale scale, size_t k, int64_t n, size_t count,
                             const double* points, const double* weights, kd_strategy** out) {
  return guarded([&] {
    require(out != nullptr, "output pointer is null");
    require(count > 0, "a mixed strategy needs at least one point");
    require(points != nullptr && weights != nullptr, "null argument");
    if (scale == KD_SCALE_DISCRETE) {
      std::vector<kd::DiscreteMixed::Entry> e;
      for (size_t s = 0; s < count; ++s) {
        auto a = allocation_of(points + s * k, k);
        if (n > 0 && a.total() != n) {
          throw kd::ValidationError("allocation does not hold n tokens");
        }
        e.push_back({std::move(a), weights[s]});
      }
      *out = make<kd_strategy>(kd::AnyMixed(kd::DiscreteMixed(std::move(e))));
    } else if (scale == KD_SCALE_CONTINUOUS) {
      std::vector<kd::ContinuousMixed::Entry> e;
      for (size_t s = 0; s < count; ++s) e.push_back({deviation_of(points + s * k, k), weights[s]});
      *out = make<kd_strategy>(kd::AnyMixed(kd::ContinuousMixed(std::move(e))));
    } else {
      throw kd::ValidationError("unknown scale");
    }
  });
}

kd_status kd_strategy_parse(const char* text, kd_strategy** out) {
  return guarded([&] {
    require(text != nullptr && out != nullptr, "null argument");
    *out = make<kd_strategy>(kd::parse_strategy(text));
  });
}

kd_status kd_strategy_load(const char* path, kd_strategy** out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "null argument");
    *out = make<kd_strategy>(kd::load_strategy(path));
  });
}

kd_status kd_strategy_save(const kd_strategy* s, const char* path) {
  return guarded([&] {
    require(s != nullptr && path != nullptr, "null argument");
    kd::save_strategy(path, s->mixed);
  });
}

kd_status kd_strategy_save_csv(const kd_strategy* s, const char* path) {
  return guarded([&] {
    require(s != nullptr && path != nullptr, "null argument");
    kd::write_text_file(path, kd::format_csv(s->mixed));
  });
}

void kd_strategy_destroy(kd_strategy* s) { delete s; }

kd_scale kd_strategy_scale(const kd_strategy* s) {
  return std::holds_alternative<kd::DiscreteMixed>(s->mixed) ? KD_SCALE_DISCRETE
                                                             : KD_SCALE_CONTINUOUS;
}

size_t kd_strategy_bins(const kd_strategy* s) {
  return std::visit([](const auto& m) { return m.bins(); }, s->mixed);
}

int64_t kd_strategy_tokens(const kd_strategy* s) {
  if (auto* d = std::get_if<kd::DiscreteMixed>(&s->mixed)) return (*d)[0].strategy.total();
  return 0;
}

size_t kd_strategy_size(const kd_strategy* s) {
  return std::visit([](const auto& m) { return m.size(); }, s->mixed);
}

kd_status kd_strategy_entry(const kd_strategy* s, size_t index, double* point, double* weight) {
  return guarded([&] {
    require(s != nullptr, "strategy is null");
    require_index(index < kd_strategy_size(s), "entry index out of range");
    if (auto* d = std::get_if<kd::DiscreteMixed>(&s->mixed)) {
      const auto& e = (*d)[index];
      if (point) {
        for (size_t i = 0; i < e.strategy.bins(); ++i) point[i] = double(e.strategy[i]);
      }
      if (weight) *weight = e.weight;
    } else {
      const auto& e = std::get<kd::ContinuousMixed>(s->mixed)[index];
      if (point) {
        for (size_t i = 0; i < e.strategy.bins(); ++i) point[i] = e.strategy[i];
      }
      if (weight) *weight = e.weight;
    }
  });
}

kd_status kd_uniform_simplex_strategy(double bound, int resolution, size_t k, kd_strategy** out) {
  return guarded([&] {
    require(out != nullptr, "output pointer is null");
    *out = make<kd_strategy>(kd::AnyMixed(kd::uniform_simplex_strategy(bound, resolution, k)));
  });
}

kd_status kd_uniform_allocations_at_least(int64_t n, size_t k, int64_t floor, kd_strategy** out) {
  return guarded([&] {
    require(out != nullptr, "output pointer is null");
    *out = make<kd_strategy>(kd::AnyMixed(kd::uniform_allocations_at_least(n, k, floor)));
  });
}

kd_status kd_undercut(const double* x, size_t k, double delta, kd_strategy** out) {
  return guarded([&] {
    require(out != nullptr, "output pointer is null");
    *out = make<kd_strategy>(kd::AnyMixed(kd::undercut(deviation_of(x, k), delta)));
  });
}

kd_status kd_last_bin_discrete(const kd_die* die, const double* counts, size_t k,
                               const kd_quadrature* q, double* out_probs, double* out_error) {
  return guarded([&] {
    check_k(die, k);
    auto r = kd::last_bin_discrete(kd::PoissonRace(die->spec, counts_of(counts, k)), quad(q));
    copy_out(r.probs, out_probs);
    if (out_error) *out_error = r.error;
  });
}

kd_status kd_last_bin_continuous(const kd_die* die, const double* levels, size_t k,
                                 const kd_quadrature* q, double* out_probs, double* out_error) {
  return guarded([&] {
    check_k(die, k);
    auto r = kd::last_bin_continuous(kd::GaussianRace(die->spec, reals_of(levels, k)), quad(q));
    copy_out(r.probs, out_probs);
    if (out_error) *out_error = r.error;
  });
}

kd_status kd_payoff(const kd_die* die, kd_scale scale, const double* a, const double* b, size_t k,
                    const kd_quadrature* q, double* payoff, double* error) {
  return guarded([&] {
    check_k(die, k);
    kd::Payoff p;
    if (scale == KD_SCALE_DISCRETE) {
      p = kd::payoff_discrete(allocation_of(a, k), allocation_of(b, k), die->spec, quad(q));
    } else {
      p = kd::payoff_continuous(deviation_of(a, k), deviation_of(b, k), die->spec, quad(q));
    }
    if (payoff) *payoff = p.value;
    if (error) *error = p.error;
  });
}

kd_status kd_beats_discrete(const kd_die* die, const double* a, const double* b, size_t k,
                            const kd_quadrature* q, double* out) {
  return guarded([&] {
    check_k(die, k);
    require(out != nullptr, "output pointer is null");
    *out = kd::beats_discrete(allocation_of(a, k), allocation_of(b, k), die->spec, quad(q));
  });
}

kd_status kd_payoff_mixed(const kd_die* die, const kd_strategy* alpha, const double* y, size_t k,
                          const kd_quadrature* q, unsigned threads, double* payoff,
                          double* error) {
  return guarded([&] {
    check_k(die, k);
    require(alpha != nullptr, "strategy is null");
    if (kd_strategy_bins(alpha) != k) throw kd::DimensionError("strategy and die disagree on k");
    kd::Payoff p;
    if (auto* d = std::get_if<kd::DiscreteMixed>(&alpha->mixed)) {
      kd::DiscreteEngine engine(die->spec, quad(q));
      p = engine.payoff_mixed(*d, allocation_of(y, k));
    } else {
      p = kd::payoff_mixed(std::get<kd::ContinuousMixed>(alpha->mixed), deviation_of(y, k),
                           die->spec, quad(q), threads);
    }
    if (payoff) *payoff = p.value;
    if (error) *error = p.error;
  });
}

kd_status kd_change_probability(const kd_die* die, const double* counts, size_t k, size_t i,
                                const kd_quadrature* q, double* exact, double* bound) {
  return guarded([&] {
    check_k(die, k);
    require_index(i < k, "bin index out of range");
    auto r = kd::change_check(kd::PoissonRace(die->spec, counts_of(counts, k)), i, quad(q));
    if (exact) *exact = r.exact;
    if (bound) *bound = r.bound;
  });
}

kd_status kd_second_difference(const kd_die* die, const double* counts, size_t k, size_t h,
                               size_t i, size_t j, const kd_quadrature* q, double* out) {
  return guarded([&] {
    check_k(die, k);
    require_index(h < k && i < k && j < k, "bin index out of range");
    require(out != nullptr, "output pointer is null");
    *out = kd::second_difference(kd::PoissonRace(die->spec, counts_of(counts, k)), h, i, j,
                                 quad(q));
  });
}

kd_status kd_simulate_match(const kd_die* die, kd_scale scale, const double* a, const double* b,
                            size_t k, uint64_t trials, uint64_t seed, unsigned threads,
                            kd_match_counts* out) {
  return guarded([&] {
    check_k(die, k);
    require(out != nullptr, "output pointer is null");
    kd::SimConfig c{trials, seed, threads};
    kd::MatchCounts m =
        scale == KD_SCALE_DISCRETE
            ? kd::simulate_match(allocation_of(a, k), allocation_of(b, k), die->spec, c)
            : kd::simulate_match(deviation_of(a, k), deviation_of(b, k), die->spec, c);
    *out = kd_match_counts{m.wins_a, m.wins_b, m.ties, m.overflow};
  });
}

kd_status kd_simulate_last_bin(const kd_die* die, kd_scale scale, const double* levels, size_t k,
                               uint64_t trials, uint64_t seed, unsigned threads,
                               uint64_t* out_counts, uint64_t* out_overflow) {
  return guarded([&] {
    check_k(die, k);
    kd::SimConfig c{trials, seed, threads};
    kd::EmpiricalLastBin e =
        scale == KD_SCALE_DISCRETE
            ? kd::simulate_last_bin(kd::PoissonRace(die->spec, counts_of(levels, k)), c)
            : kd::simulate_last_bin(kd::GaussianRace(die->spec, reals_of(levels, k)), c);
    if (out_counts) std::memcpy(out_counts, e.counts.data(), k * sizeof(uint64_t));
    if (out_overflow) *out_overflow = e.overflow;
  });
}

kd_status kd_grid_create_continuous(const kd_die* die, double spacing, double bound,
                                    kd_grid** out) {
  return guarded([&] {
    require(die != nullptr && out != nullptr, "null argument");
    *out = make<kd_grid>(kd::build_continuous_grid(die->spec, spacing, bound));
  });
}

kd_status kd_grid_create_discrete(const kd_die* die, int64_t n, double bound, kd_grid** out) {
  return guarded([&] {
    require(die != nullptr && out != nullptr, "null argument");
    std::optional<double> b;
    if (bound > 0) b = bound;
    *out = make<kd_grid>(kd::build_discrete_grid(die->spec, n, b));
  });
}

void kd_grid_destroy(kd_grid* g) { delete g; }

size_t kd_grid_size(const kd_grid* g) { return g ? g->grid.size() : 0; }

kd_status kd_grid_point(const kd_grid* g, size_t index, double* out_point) {
  return guarded([&] {
    require(g != nullptr && out_point != nullptr, "null argument");
    require_index(index < g->grid.size(), "grid index out of range");
    if (g->grid.scale == kd::Scale::discrete) {
      const auto& a = g->grid.allocations[index];
      for (size_t i = 0; i < a.bins(); ++i) out_point[i] = double(a[i]);
    } else {
      const auto& x = g->grid.deviations[index];
      for (size_t i = 0; i < x.bins(); ++i) out_point[i] = x[i];
    }
  });
}

kd_status kd_matrix_build(const kd_grid* g, const kd_die* die, const kd_quadrature* q,
                          unsigned threads, const char* cache_path, kd_matrix** out,
                          int* from_cache) {
  return guarded([&] {
    require(g != nullptr && die != nullptr && out != nullptr, "null argument");
    auto spec = quad(q);
    if (from_cache) *from_cache = 0;
    std::string key;
    if (cache_path) {
      key = kd::matrix_cache_key(g->grid, die->spec, spec);
      if (auto m = kd::load_matrix(cache_path, key)) {
        if (from_cache) *from_cache = 1;
        *out = make<kd_matrix>(std::move(*m));
        return;
      }
    }
    auto m = kd::build_matrix(g->grid, die->spec, spec, threads);
    if (cache_path) kd::save_matrix(cache_path, key, m);
    *out = make<kd_matrix>(std::move(m));
  });
}

void kd_matrix_destroy(kd_matrix* m) { delete m; }

size_t kd_matrix_size(const kd_matrix* m) { return m ? m->matrix.size() : 0; }

double kd_matrix_entry(const kd_matrix* m, size_t i, size_t j) {
  if (!m || i >= m->matrix.size() || j >= m->matrix.size()) return std::nan("");
  return m->matrix(i, j);
}

kd_status kd_fictitious_play(const kd_matrix* m, const kd_grid* g, double eps,
                             int64_t max_iterations, kd_solution** out) {
  return guarded([&] {
    require(m != nullptr && g != nullptr && out != nullptr, "null argument");
    if (m->matrix.size() != g->grid.size()) {
      throw kd::DimensionError("matrix and grid sizes differ");
    }
    auto r = kd::fictitious_play(m->matrix, eps, max_iterations);
    kd::AnyMixed s = g->grid.scale == kd::Scale::discrete
                         ? kd::AnyMixed(kd::to_discrete_mixed(g->grid, r.weights))
                         : kd::AnyMixed(kd::to_continuous_mixed(g->grid, r.weights));
    *out = new kd_solution{std::move(r), std::move(s)};
  });
}

void kd_solution_destroy(kd_solution* s) { delete s; }
double kd_solution_exploitability(const kd_solution* s) { return s->result.exploitability; }
double kd_solution_value(const kd_solution* s) { return s->result.value; }
int64_t kd_solution_iterations(const kd_solution* s) { return s->result.iterations; }
int kd_solution_converged(const kd_solution* s) { return s->result.converged ? 1 : 0; }
size_t kd_solution_checkpoint_count(const kd_solution* s) { return s->result.checkpoints.size(); }

kd_status kd_solution_checkpoint(const kd_solution* s, size_t index, int64_t* iteration,
                                 double* exploitability) {
  return guarded([&] {
    require(s != nullptr, "solution is null");
    require_index(index < s->result.checkpoints.size(), "checkpoint index out of range");
    const auto& c = s->result.checkpoints[index];
    if (iteration) *iteration = c.iteration;
    if (exploitability) *exploitability = c.exploitability;
  });
}

kd_status kd_solution_strategy(const kd_solution* s, kd_strategy** out) {
  return guarded([&] {
    require(s != nullptr && out != nullptr, "null argument");
    *out = make<kd_strategy>(s->strategy);
  });
}

kd_status kd_best_response(const kd_die* die, const kd_strategy* alpha, const kd_grid* g,
                           const kd_quadrature* q, unsigned threads, size_t* index,
                           double* payoff) {
  return guarded([&] {
    require(die != nullptr && alpha != nullptr && g != nullptr, "null argument");
    kd::BestResponse br;
    if (auto* d = std::get_if<kd::DiscreteMixed>(&alpha->mixed)) {
      require(g->grid.scale == kd::Scale::discrete, "grid scale differs from strategy scale");
      kd::DiscreteEngine engine(die->spec, quad(q));
      br = kd::best_response(*d, g->grid, engine, threads);
    } else {
      require(g->grid.scale == kd::Scale::continuous, "grid scale differs from strategy scale");
      br = kd::best_response(std::get<kd::ContinuousMixed>(alpha->mixed), g->grid, die->spec,
                             quad(q), threads);
    }
    if (index) *index = br.index;
    if (payoff) *payoff = br.payoff;
  });
}

kd_status kd_kappa(const kd_die* die, const kd_strategy* alpha, const kd_quadrature* q,
                   unsigned threads, double* kappa, double* out_response) {
  return guarded([&] {
    require(die != nullptr && alpha != nullptr, "null argument");
    auto* d = std::get_if<kd::DiscreteMixed>(&alpha->mixed);
    require(d != nullptr, "kappa needs a discrete strategy");
    auto r = kd::kappa(*d, die->spec, quad(q), threads);
    if (kappa) *kappa = r.kappa;
    if (out_response) {
      for (size_t i = 0; i < r.response.size(); ++i) out_response[i] = double(r.response[i]);
    }
  });
}

kd_status kd_marginal_spacing(const kd_strategy* s, size_t coordinate, double delta, double* out) {
  return guarded([&] {
    require(s != nullptr && out != nullptr, "null argument");
    *out = std::visit([&](const auto& m) { return kd::marginal_spacing(m, coordinate, delta); },
                      s->mixed);
  });
}

kd_status kd_flatness(const kd_die* die, int64_t n, const kd_quadrature* q, double* max_abs,
                      double* scaled) {
  return guarded([&] {
    require(die != nullptr, "die is null");
    auto r = kd::flatness(die->spec, n, quad(q));
    if (max_abs) *max_abs = r.max_abs;
    if (scaled) *scaled = r.scaled;
  });
}

kd_status kd_overplay_pair(const kd_die* die, int64_t n, double w, const kd_quadrature* q,
                           double* eta, double* xi, double* beat_probability, double* bound) {
  return guarded([&] {
    require(die != nullptr, "die is null");
    auto r = kd::overplay_pair(die->spec, n, w, quad(q));
    for (size_t i = 0; i < die->spec.bins(); ++i) {
      if (eta) eta[i] = double(r.eta[i]);
      if (xi) xi[i] = double(r.xi[i]);
    }
    if (beat_probability) *beat_probability = r.beat_probability;
    if (bound) *bound = r.bound;
  });
}

kd_status kd_undercut_gap(const kd_die* die, const double* x, const double* y, size_t k,
                          double delta, const kd_quadrature* q, double* out) {
  return guarded([&] {
    check_k(die, k);
    require(out != nullptr, "output pointer is null");
    *out = kd::undercut_gap(deviation_of(x, k), deviation_of(y, k), delta, die->spec, quad(q));
  });
}

}  // extern "C"
