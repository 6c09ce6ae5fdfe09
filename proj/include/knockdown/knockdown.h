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

#ifndef KNOCKDOWN_KNOCKDOWN_H_
#define KNOCKDOWN_KNOCKDOWN_H_

/*
 * C interface to the two-player dice race library.
 *
 * Objects are opaque handles created by kd_*_create / kd_*_load style calls
 * and released with the matching kd_*_destroy. Every fallible call returns a
 * kd_status; on failure kd_last_error() describes the problem for the
 * calling thread until its next failing call.
 *
 * Payoffs use the half-difference convention: K(a, b) = Pr[a beats b] - 1/2,
 * ties split evenly, so K lies in [-1/2, 1/2]. Discrete points are passed as
 * doubles holding integer token counts.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(KNOCKDOWN_BUILDING)
#    define KD_API __declspec(dllexport)
#  else
#    define KD_API __declspec(dllimport)
#  endif
#else
#  define KD_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum kd_status {
  KD_OK = 0,
  KD_ERR_INVALID_ARGUMENT = 1,
  KD_ERR_DIMENSION = 2,
  KD_ERR_DOMAIN = 3,
  KD_ERR_QUADRATURE = 4,
  KD_ERR_IO = 5,
  KD_ERR_INTERNAL = 6
} kd_status;

typedef enum kd_scale { KD_SCALE_DISCRETE = 0, KD_SCALE_CONTINUOUS = 1 } kd_scale;

typedef struct kd_die kd_die;
typedef struct kd_strategy kd_strategy;
typedef struct kd_grid kd_grid;
typedef struct kd_matrix kd_matrix;
typedef struct kd_solution kd_solution;

typedef struct kd_quadrature {
  double abs_tolerance;
  int max_subdivisions;
  double truncation_sigmas;
} kd_quadrature;

typedef struct kd_match_counts {
  uint64_t wins_a;
  uint64_t wins_b;
  uint64_t ties;
  uint64_t overflow;
} kd_match_counts;

KD_API const char* kd_version(void);
KD_API const char* kd_last_error(void);
KD_API const char* kd_status_name(kd_status status);

/* Tolerance 1e-10, 2000 subdivisions, 10 sigma truncation. */
KD_API kd_quadrature kd_quadrature_default(void);

/* ---- dice ---------------------------------------------------------------- */

KD_API kd_status kd_die_create(const double* probs, size_t k, kd_die** out);
/* Comma-separated probabilities; "a/b" entries are parsed as fractions. */
KD_API kd_status kd_die_parse(const char* text, kd_die** out);
KD_API void kd_die_destroy(kd_die* die);
KD_API size_t kd_die_bins(const kd_die* die);
KD_API double kd_die_prob(const kd_die* die, size_t i);

/* ---- pure strategies ----------------------------------------------------- */

KD_API kd_status kd_overplay(const kd_die* die, const double* counts, size_t k, double* out);
KD_API kd_status kd_overplay_limit(const kd_die* die, int64_t n, double* out);
KD_API kd_status kd_round_deviation(const kd_die* die, const double* x, size_t k, int64_t n,
                                    double* out_counts);

/* ---- mixed strategies ---------------------------------------------------- */

/* points is row-major count x k; n is ignored on the continuous scale. */
KD_API kd_status kd_strategy_create(kd_scale scale, size_t k, int64_t n, size_t count,
                                    const double* points, const double* weights,
                                    kd_strategy** out);
KD_API kd_status kd_strategy_parse(const char* text, kd_strategy** out);
KD_API kd_status kd_strategy_load(const char* path, kd_strategy** out);
KD_API kd_status kd_strategy_save(const kd_strategy* s, const char* path);
/* Columns x1,...,xk,weight. */
KD_API kd_status kd_strategy_save_csv(const kd_strategy* s, const char* path);
KD_API void kd_strategy_destroy(kd_strategy* s);
KD_API kd_scale kd_strategy_scale(const kd_strategy* s);
KD_API size_t kd_strategy_bins(const kd_strategy* s);
KD_API int64_t kd_strategy_tokens(const kd_strategy* s);
KD_API size_t kd_strategy_size(const kd_strategy* s);
KD_API kd_status kd_strategy_entry(const kd_strategy* s, size_t index, double* point,
                                   double* weight);

KD_API kd_status kd_uniform_simplex_strategy(double bound, int resolution, size_t k,
                                             kd_strategy** out);
KD_API kd_status kd_uniform_allocations_at_least(int64_t n, size_t k, int64_t floor,
                                                 kd_strategy** out);
KD_API kd_status kd_undercut(const double* x, size_t k, double delta, kd_strategy** out);

/* ---- payoff engines ------------------------------------------------------ */

/* q may be NULL for the defaults. out_error may be NULL. */
KD_API kd_status kd_last_bin_discrete(const kd_die* die, const double* counts, size_t k,
                                      const kd_quadrature* q, double* out_probs,
                                      double* out_error);
KD_API kd_status kd_last_bin_continuous(const kd_die* die, const double* levels, size_t k,
                                        const kd_quadrature* q, double* out_probs,
                                        double* out_error);
KD_API kd_status kd_payoff(const kd_die* die, kd_scale scale, const double* a, const double* b,
                           size_t k, const kd_quadrature* q, double* payoff, double* error);
KD_API kd_status kd_beats_discrete(const kd_die* die, const double* a, const double* b, size_t k,
                                   const kd_quadrature* q, double* out);
/* K(alpha, y); y is interpreted on alpha's scale. */
KD_API kd_status kd_payoff_mixed(const kd_die* die, const kd_strategy* alpha, const double* y,
                                 size_t k, const kd_quadrature* q, unsigned threads,
                                 double* payoff, double* error);
KD_API kd_status kd_change_probability(const kd_die* die, const double* counts, size_t k,
                                       size_t i, const kd_quadrature* q, double* exact,
                                       double* bound);
KD_API kd_status kd_second_difference(const kd_die* die, const double* counts, size_t k,
                                      size_t h, size_t i, size_t j, const kd_quadrature* q,
                                      double* out);

/* ---- simulation ---------------------------------------------------------- */

KD_API kd_status kd_simulate_match(const kd_die* die, kd_scale scale, const double* a,
                                   const double* b, size_t k, uint64_t trials, uint64_t seed,
                                   unsigned threads, kd_match_counts* out);
/* out_counts has k entries; trials hitting the roll cap go to *out_overflow. */
KD_API kd_status kd_simulate_last_bin(const kd_die* die, kd_scale scale, const double* levels,
                                      size_t k, uint64_t trials, uint64_t seed, unsigned threads,
                                      uint64_t* out_counts, uint64_t* out_overflow);

/* ---- solver -------------------------------------------------------------- */

KD_API kd_status kd_grid_create_continuous(const kd_die* die, double spacing, double bound,
                                           kd_grid** out);
/* bound <= 0 means no deviation bound beyond the overplay limit. */
KD_API kd_status kd_grid_create_discrete(const kd_die* die, int64_t n, double bound,
                                         kd_grid** out);
KD_API void kd_grid_destroy(kd_grid* g);
KD_API size_t kd_grid_size(const kd_grid* g);
KD_API kd_status kd_grid_point(const kd_grid* g, size_t index, double* out_point);

/* cache_path may be NULL; *from_cache (nullable) reports a cache hit. */
KD_API kd_status kd_matrix_build(const kd_grid* g, const kd_die* die, const kd_quadrature* q,
                                 unsigned threads, const char* cache_path, kd_matrix** out,
                                 int* from_cache);
KD_API void kd_matrix_destroy(kd_matrix* m);
KD_API size_t kd_matrix_size(const kd_matrix* m);
KD_API double kd_matrix_entry(const kd_matrix* m, size_t i, size_t j);

KD_API kd_status kd_fictitious_play(const kd_matrix* m, const kd_grid* g, double eps,
                                    int64_t max_iterations, kd_solution** out);
KD_API void kd_solution_destroy(kd_solution* s);
KD_API double kd_solution_exploitability(const kd_solution* s);
KD_API double kd_solution_value(const kd_solution* s);
KD_API int64_t kd_solution_iterations(const kd_solution* s);
KD_API int kd_solution_converged(const kd_solution* s);
KD_API size_t kd_solution_checkpoint_count(const kd_solution* s);
KD_API kd_status kd_solution_checkpoint(const kd_solution* s, size_t index, int64_t* iteration,
                                        double* exploitability);
KD_API kd_status kd_solution_strategy(const kd_solution* s, kd_strategy** out);

KD_API kd_status kd_best_response(const kd_die* die, const kd_strategy* alpha, const kd_grid* g,
                                  const kd_quadrature* q, unsigned threads, size_t* index,
                                  double* payoff);
/* out_response (nullable) receives k counts. */
KD_API kd_status kd_kappa(const kd_die* die, const kd_strategy* alpha, const kd_quadrature* q,
                          unsigned threads, double* kappa, double* out_response);
KD_API kd_status kd_marginal_spacing(const kd_strategy* s, size_t coordinate, double delta,
                                     double* out);

/* ---- diagnostics --------------------------------------------------------- */

/* max |second difference| over all (h, i, j) at the proportional race; scaled = that * n. */
KD_API kd_status kd_flatness(const kd_die* die, int64_t n, const kd_quadrature* q,
                             double* max_abs, double* scaled);
KD_API kd_status kd_overplay_pair(const kd_die* die, int64_t n, double w, const kd_quadrature* q,
                                  double* eta, double* xi, double* beat_probability,
                                  double* bound);
KD_API kd_status kd_undercut_gap(const kd_die* die, const double* x, const double* y, size_t k,
                                 double delta, const kd_quadrature* q, double* out);

#ifdef __cplusplus
}
#endif

#endif /* KNOCKDOWN_KNOCKDOWN_H_ */
