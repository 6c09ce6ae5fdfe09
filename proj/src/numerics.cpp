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

#include "numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/special_functions/gamma.hpp>

namespace knockdown::numerics {
namespace {

void check_lambda(double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw std::domain_error("Poisson mean must be finite and nonnegative, got " +
                            std::to_string(lambda));
  }
}

}  // namespace

double log_factorial(std::int64_t m) {
  if (m < 0) throw std::domain_error("log_factorial of negative argument");
  return std::lgamma(static_cast<double>(m) + 1.0);
}

double poisson_pmf(double lambda, std::int64_t m) {
  check_lambda(lambda);
  if (m < 0) return 0.0;
  if (lambda == 0.0) return m == 0 ? 1.0 : 0.0;
  // d/dx P(m + 1, x) = e^{-x} x^m / m!.
  return boost::math::gamma_p_derivative(static_cast<double>(m) + 1.0, lambda);
}

double poisson_tail(double lambda, std::int64_t m) {
  check_lambda(lambda);
  if (m <= 0) return 1.0;
  if (lambda == 0.0) return 0.0;
  return boost::math::gamma_p(static_cast<double>(m), lambda);
}

double normal_pdf(double z) {
  return std::exp(-0.5 * z * z) * (0.5 * std::numbers::inv_sqrtpi * std::numbers::sqrt2);
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z * (0.5 * std::numbers::sqrt2)); }

void QuadratureSpec::validate() const {
  if (!(abs_tolerance > 0.0)) throw std::invalid_argument("quadrature tolerance must be positive");
  if (max_subdivisions < 1) throw std::invalid_argument("quadrature needs at least one subdivision");
  if (!(truncation_sigmas >= 6.0)) throw std::invalid_argument("truncation must be at least 6 sigma");
}

namespace {

// 15-point Kronrod abscissae (descending, last is the centre) and weights,
// with the embedded 7-point Gauss weights on the odd-indexed nodes.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double lo;
  double hi;
  std::vector<double> value;
  std::vector<double> error;
  double worst;
};

Panel gauss_kronrod(const MultiIntegrand& f, std::size_t dim, double lo, double hi,
                    std::vector<double>& scratch) {
  const double centre = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  Panel p{lo, hi, std::vector<double>(dim, 0.0), std::vector<double>(dim, 0.0), 0.0};
  std::vector<double> gauss(dim, 0.0);
  auto fx = std::span<double>(scratch.data(), dim);

  f(centre, fx);
  for (std::size_t c = 0; c < dim; ++c) {
    p.value[c] = kWgk[7] * fx[c];
    gauss[c] = kWg[3] * fx[c];
  }
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kXgk[i];
    for (double t : {centre - dx, centre + dx}) {
      f(t, fx);
      for (std::size_t c = 0; c < dim; ++c) {
        p.value[c] += kWgk[i] * fx[c];
        if (i % 2 == 1) gauss[c] += kWg[i / 2] * fx[c];
      }
    }
  }
  for (std::size_t c = 0; c < dim; ++c) {
    p.value[c] *= half;
    gauss[c] *= half;
    p.error[c] = std::abs(p.value[c] - gauss[c]);
    p.worst = std::max(p.worst, p.error[c]);
  }
  return p;
}

}  // namespace

MultiIntegral integrate_multi(const MultiIntegrand& f, std::size_t dim, double lo,
                              double hi, const QuadratureSpec& spec, int initial_panels) {
  spec.validate();
  if (!(lo < hi)) throw std::invalid_argument("integration interval must satisfy lo < hi");
  if (dim == 0) return MultiIntegral{};
  initial_panels = std::max(initial_panels, 1);

  std::vector<double> scratch(dim);
  std::vector<Panel> panels;
  panels.reserve(static_cast<std::size_t>(initial_panels + spec.max_subdivisions));
  const double width = (hi - lo) / initial_panels;
  for (int i = 0; i < initial_panels; ++i) {
    const double a = lo + i * width;
    const double b = (i + 1 == initial_panels) ? hi : lo + (i + 1) * width;
    panels.push_back(gauss_kronrod(f, dim, a, b, scratch));
  }

  auto totals = [&](MultiIntegral& out) {
    out.values.assign(dim, 0.0);
    std::vector<double> err(dim, 0.0);
    for (const auto& p : panels) {
      for (std::size_t c = 0; c < dim; ++c) {
        out.values[c] += p.value[c];
        err[c] += p.error[c];
      }
    }
    out.error = *std::max_element(err.begin(), err.end());
  };

  MultiIntegral result;
  auto by_worst = [](const Panel& a, const Panel& b) { return a.worst < b.worst; };
  std::make_heap(panels.begin(), panels.end(), by_worst);
  for (int split = 0;; ++split) {
    totals(result);
    result.subdivisions = split;
    if (result.error <= spec.abs_tolerance) return result;
    if (split >= spec.max_subdivisions) break;
    std::pop_heap(panels.begin(), panels.end(), by_worst);
    const Panel worst = std::move(panels.back());
    panels.pop_back();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (!(worst.lo < mid && mid < worst.hi)) break;  // interval exhausted
    panels.push_back(gauss_kronrod(f, dim, worst.lo, mid, scratch));
    std::push_heap(panels.begin(), panels.end(), by_worst);
    panels.push_back(gauss_kronrod(f, dim, mid, worst.hi, scratch));
    std::push_heap(panels.begin(), panels.end(), by_worst);
  }
  throw QuadratureError("adaptive quadrature did not reach tolerance " +
                            std::to_string(spec.abs_tolerance) + " (estimated error " +
                            std::to_string(result.error) + ")",
                        result);
}

Integral integrate(const std::function<double(double)>& f, double lo, double hi,
                   const QuadratureSpec& spec, int initial_panels) {
  const auto r = integrate_multi([&](double t, std::span<double> out) { out[0] = f(t); }, 1,
                                 lo, hi, spec, initial_panels);
  return Integral{r.values[0], r.error};
}

}  // namespace knockdown::numerics
