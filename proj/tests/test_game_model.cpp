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

#include <algorithm>
#include <cmath>
#include <set>

#include "doctest.h"
#include "game_model.hpp"

using namespace knockdown;

TEST_CASE("DieSpec invariants") {
  CHECK_NOTHROW(DieSpec({0.5, 0.5}));
  CHECK_THROWS_AS(DieSpec({1.0}), ValidationError);
  CHECK_THROWS_AS(DieSpec({0.5, 0.6}), ValidationError);
  CHECK_THROWS_AS(DieSpec({1.0, 0.0}), ValidationError);
  CHECK_THROWS_AS(DieSpec({1.2, -0.2}), ValidationError);
  CHECK(DieSpec::uniform(3).is_uniform());
  CHECK_FALSE(DieSpec({0.25, 0.75}).is_uniform());
  CHECK(DieSpec({0.25, 0.75}).min_prob() == 0.25);
}

TEST_CASE("TokenAllocation and Deviation invariants") {
  CHECK_THROWS_AS(TokenAllocation({1, -1, 2}), ValidationError);
  CHECK_THROWS_AS(TokenAllocation({0, 0}), ValidationError);
  CHECK(TokenAllocation({3, 4}).total() == 7);
  CHECK_NOTHROW(Deviation({0.1, -0.1}));
  CHECK_NOTHROW(Deviation({0.1, -0.1 + 5e-10}));
  CHECK_THROWS_AS(Deviation({0.1, -0.09}), ValidationError);
  CHECK_THROWS_AS(Deviation({NAN, 0.0}), ValidationError);
}

TEST_CASE("overplay examples") {
  const auto u3 = DieSpec::uniform(3);
  CHECK(overplay(TokenAllocation({60, 60, 60}), u3) == doctest::Approx(0.0));
  CHECK(overplay(TokenAllocation({58, 58, 64}), u3) == doctest::Approx(12.0));
  CHECK(overplay(TokenAllocation({12, 0}), DieSpec::uniform(2)) == 12.0);
  CHECK_THROWS_AS(overplay(TokenAllocation({1, 2}), u3), DimensionError);
}

TEST_CASE("overplay is nonnegative and vanishes only at n p") {
  const DieSpec d({0.2, 0.3, 0.5});
  for (const auto& a : all_allocations(10, 3)) {
    const double o = overplay(a, d);
    CHECK(o >= -1e-12);
    const bool proportional = a[0] == 2 && a[1] == 3 && a[2] == 5;
    CHECK((std::abs(o) < 1e-12) == proportional);
  }
}

TEST_CASE("undercut examples and properties") {
  const auto u = undercut(Deviation({0.0, 0.0, 0.0}), 0.1);
  REQUIRE(u.size() == 3);
  const double expect[3][3] = {{0.2, -0.1, -0.1}, {-0.1, 0.2, -0.1}, {-0.1, -0.1, 0.2}};
  for (std::size_t s = 0; s < 3; ++s) {
    CHECK(u[s].weight == doctest::Approx(1.0 / 3.0));
    for (std::size_t i = 0; i < 3; ++i) CHECK(u[s].strategy[i] == doctest::Approx(expect[s][i]));
  }
  const auto u2 = undercut(Deviation({1.0, -1.0}), 0.5);
  CHECK(u2[0].strategy[0] == doctest::Approx(1.5));
  CHECK(u2[0].strategy[1] == doctest::Approx(-1.5));
  CHECK(u2[1].strategy[0] == doctest::Approx(0.5));
  CHECK(u2[1].strategy[1] == doctest::Approx(-0.5));

  const Deviation x({0.31, -0.07, 0.2, -0.44});
  const auto ux = undercut(x, 0.013);
  for (std::size_t i = 0; i < 4; ++i) {
    double mean = 0.0;
    for (const auto& e : ux.entries()) mean += e.weight * e.strategy[i];
    CHECK(mean == doctest::Approx(x[i]).epsilon(1e-12));
  }
  for (const auto& e : ux.entries()) {
    double s = 0.0;
    for (double v : e.strategy.values()) s += v;
    CHECK(std::abs(s) < 1e-12);
  }
  CHECK_THROWS_AS(undercut(x, 0.0), ValidationError);
  CHECK_THROWS_AS(undercut(x, -0.1), ValidationError);
}

TEST_CASE("round_deviation examples") {
  const auto u3 = DieSpec::uniform(3);
  CHECK(round_deviation(Deviation({0, 0, 0}), 180, u3) == TokenAllocation({60, 60, 60}));
  // Floor boundary: 60 - sqrt(180)/6 = 57.76 rounds up to 58 in two bins.
  const auto r = round_deviation(Deviation({-1.0 / 6, -1.0 / 6, 1.0 / 3}), 180, u3);
  CHECK(r.total() == 180);
  CHECK(*std::min_element(r.counts().begin(), r.counts().end()) == 58);
  CHECK(round_deviation(Deviation({0.5, -0.5}), 100, DieSpec::uniform(2)) ==
        TokenAllocation({55, 45}));
}

TEST_CASE("round_deviation ties go to the lowest index") {
  // Remainders 1/3 in every bin; one leftover token goes to bin 0.
  const auto r = round_deviation(Deviation({0, 0, 0}), 10, DieSpec::uniform(3));
  CHECK(r == TokenAllocation({4, 3, 3}));
}

TEST_CASE("round_deviation is exact on integer targets") {
  const DieSpec d({0.25, 0.25, 0.5});
  const std::int64_t n = 16;  // sqrt(n) = 4
  for (const auto& a : all_allocations(n, 3)) {
    std::vector<double> x(3);
    for (std::size_t i = 0; i < 3; ++i) x[i] = (a[i] - d.prob(i) * n) / 4.0;
    CHECK(round_deviation(Deviation(x), n, d) == a);
  }
}

TEST_CASE("round_deviation converges and rejects negative counts") {
  const DieSpec d({0.2, 0.3, 0.5});
  const Deviation x({0.4, -0.9, 0.5});
  for (std::int64_t n : {100, 1000, 10000, 100000}) {
    const auto a = round_deviation(x, n, d);
    double err = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
      err = std::max(err, std::abs((a[i] - d.prob(i) * n) / std::sqrt(double(n)) - x[i]));
    }
    CHECK(err <= 1.0 / std::sqrt(double(n)) + 1e-12);
  }
  CHECK_THROWS_AS(round_deviation(Deviation({-5.0, 5.0}), 4, DieSpec::uniform(2)),
                  std::domain_error);
}

TEST_CASE("Mixed strategy validation") {
  using E = DiscreteMixed::Entry;
  const TokenAllocation a({1, 2}), b({2, 1}), c({1, 1});
  CHECK_NOTHROW(DiscreteMixed({E{a, 0.25}, E{b, 0.75}}));
  CHECK_THROWS_AS(DiscreteMixed({E{a, 0.5}, E{b, 0.4}}), ValidationError);
  CHECK_THROWS_AS(DiscreteMixed({E{a, 0.0}, E{b, 1.0}}), ValidationError);
  CHECK_THROWS_AS(DiscreteMixed({E{a, 0.5}, E{a, 0.5}}), ValidationError);
  CHECK_THROWS_AS(DiscreteMixed({E{a, 0.5}, E{c, 0.5}}), ValidationError);
  CHECK_THROWS_AS(DiscreteMixed(std::vector<E>{}), ValidationError);
  CHECK_THROWS_AS(
      ContinuousMixed({{Deviation({0, 0}), 0.5}, {Deviation({0, 0, 0}), 0.5}}), DimensionError);
  const auto pm = ContinuousMixed::point_mass(Deviation({0.1, -0.1}));
  CHECK(pm.size() == 1);
  CHECK(pm[0].weight == 1.0);
}

TEST_CASE("uniform_simplex_strategy degenerate grid and constraints") {
  const auto one = uniform_simplex_strategy(1.0 / 6, 1, 3);
  REQUIRE(one.size() == 1);
  for (double v : one[0].strategy.values()) CHECK(std::abs(v) < 1e-15);
  CHECK(one[0].weight == 1.0);
  for (int r : {2, 5, 12, 60}) {
    const auto s = uniform_simplex_strategy(1.0 / 6, r, 3);
    CHECK(s.size() == static_cast<std::size_t>(r * r));
    for (const auto& e : s.entries()) {
      double sum = 0.0;
      for (double v : e.strategy.values()) {
        CHECK(v >= -1.0 / 6 - 1e-15);
        sum += v;
      }
      CHECK(std::abs(sum) < 1e-12);
      CHECK(e.weight == doctest::Approx(1.0 / (r * r)));
    }
  }
  CHECK_THROWS_AS(uniform_simplex_strategy(0.0, 3, 3), ValidationError);
  CHECK_THROWS_AS(uniform_simplex_strategy(0.1, 0, 3), ValidationError);
  CHECK_THROWS_AS(uniform_simplex_strategy(0.1, 3, 1), ValidationError);
}

TEST_CASE("uniform_simplex_strategy reproduces uniform moments") {
  // Uniform on the triangle with vertices (2b,-b,-b) and permutations:
  // E[x_i] = 0 and E[x_i^2] = b^2 / 2.
  const double b = 1.0 / 6;
  double prev = INFINITY;
  for (int r : {3, 6, 12, 24, 48}) {
    const auto s = uniform_simplex_strategy(b, r, 3);
    double m1 = 0.0, m2 = 0.0;
    for (const auto& e : s.entries()) {
      m1 += e.weight * e.strategy[2];
      m2 += e.weight * e.strategy[2] * e.strategy[2];
    }
    CHECK(std::abs(m1) < 1e-14);
    const double err = std::abs(m2 - b * b / 2);
    CHECK(err < prev);
    prev = err;
  }
  CHECK(prev < 1e-5);
  // k = 4: simplex with vertices 3b e_i - b, E[x_i^2] = 3 b^2 / 5.
  const auto s4 = uniform_simplex_strategy(b, 16, 4);
  CHECK(s4.size() == 16u * 16u * 16u);
  double m2 = 0.0;
  for (const auto& e : s4.entries()) m2 += e.weight * e.strategy[0] * e.strategy[0];
  CHECK(m2 == doctest::Approx(3 * b * b / 5).epsilon(1e-2));
}

TEST_CASE("allocation enumeration") {
  const auto all3 = all_allocations(3, 3);
  CHECK(all3.size() == 10);
  CHECK(std::is_sorted(all3.begin(), all3.end()));
  CHECK(std::set<TokenAllocation>(all3.begin(), all3.end()).size() == 10);
  CHECK(all_allocations(180, 3).size() == 16471);
  const auto alpha = uniform_allocations_at_least(180, 3, 58);
  CHECK(alpha.size() == 28);
  for (const auto& e : alpha.entries()) {
    CHECK(e.strategy.total() == 180);
    for (auto c : e.strategy.counts()) CHECK(c >= 58);
    CHECK(e.weight == doctest::Approx(1.0 / 28));
  }
  CHECK_THROWS_AS(uniform_allocations_at_least(10, 3, 4), ValidationError);
}

TEST_CASE("to_deviation inverts the token scale") {
  const DieSpec d({0.25, 0.75});
  const auto x = to_deviation(TokenAllocation({30, 70}), d);
  CHECK(x[0] == doctest::Approx(0.5));
  CHECK(x[1] == doctest::Approx(-0.5));
}
