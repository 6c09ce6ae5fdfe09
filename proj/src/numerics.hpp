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

// Special functions and quadrature shared by the payoff engines.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace knockdown::numerics {

/// Pr[Poisson(lambda) = m], evaluated in log space.
double poisson_pmf(double lambda, std::int64_t m);

/// Pr[Poisson(lambda) >= m]. Equal to the regularized lower incomplete gamma
/// P(m, lambda) for m >= 1 and to 1 for m <= 0.
double poisson_tail(double lambda, std::int64_t m);

/// log(m!) for m >= 0.
double log_factorial(std::int64_t m);

double normal_pdf(double z);
double normal_cdf(double z);

struct QuadratureSpec {
  double abs_tolerance = 1e-10;
  int max_subdivisions = 2000;
  double truncation_sigmas = 10.0;

  void validate() const;
};

struct Integral {
  double value = 0.0;
  double error = 0.0;
};

// Vector-valued result; `error` is the largest per-component estimate.
struct MultiIntegral {
  std::vector<double> values;
  double error = 0.0;
  int subdivisions = 0;
};

class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, MultiIntegral best)
      : std::runtime_error(what), best_(std::move(best)) {}
  const MultiIntegral& best_estimate() const { return best_; }

 private:
  MultiIntegral best_;
};

// Integrand writing `dim` values at abscissa t into the output span.
using MultiIntegrand = std::function<void(double t, std::span<double> out)>;

/// Globally adaptive 15-point Gauss-Kronrod quadrature of a vector-valued
/// integrand. The interval is first split into `initial_panels` equal
/// panels; the panel with the largest error is bisected until the summed
/// error estimate of every component is below spec.abs_tolerance.
/// Throws QuadratureError (carrying the best estimate) when the subdivision
/// budget runs out.
MultiIntegral integrate_multi(const MultiIntegrand& f, std::size_t dim,
                              double lo, double hi, const QuadratureSpec& spec,
                              int initial_panels = 1);

Integral integrate(const std::function<double(double)>& f, double lo,
                   double hi, const QuadratureSpec& spec,
                   int initial_panels = 1);

}  // namespace knockdown::numerics
