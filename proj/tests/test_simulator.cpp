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

#include <cmath>
#include <set>

#include "discrete_engine.hpp"
#include "doctest.h"
#include "oracles.hpp"
#include "simulator.hpp"

using namespace knockdown;

TEST_CASE("identical strategies always tie") {
  const SimConfig c{20000, 1, 1};
  const auto m = simulate_match(TokenAllocation({3, 2, 5}), TokenAllocation({3, 2, 5}),
                                DieSpec({0.3, 0.2, 0.5}), c);
  CHECK(m.ties == c.trials);
  CHECK(m.wins_a == 0);
  CHECK(m.wins_b == 0);
  const auto g = simulate_match(Deviation({0.1, -0.1}), Deviation({0.1, -0.1}),
                                DieSpec::uniform(2), c);
  CHECK(g.ties == c.trials);
}

TEST_CASE("(2,0) against (1,1) wins a quarter of the time") {
  const SimConfig c{1000000, 42, 1};
  const auto m = simulate_match(TokenAllocation({2, 0}), TokenAllocation({1, 1}),
                                DieSpec::uniform(2), c);
  CHECK(m.wins_a + m.wins_b + m.ties == c.trials);
  const double f = double(m.wins_a) / double(c.trials);
  CHECK(std::abs(f - 0.25) <= 4 * oracle::binomial_se(0.25, c.trials));
  CHECK(m.overflow == 0);
}

TEST_CASE("swapping players swaps the counts under one seed") {
  const SimConfig c{200000, 77, 2};
  const DieSpec d({0.2, 0.3, 0.5});
  const TokenAllocation a({4, 6, 10}), b({2, 8, 10});
  const auto ab = simulate_match(a, b, d, c), ba = simulate_match(b, a, d, c);
  CHECK(ab.wins_a == ba.wins_b);
  CHECK(ab.wins_b == ba.wins_a);
  CHECK(ab.ties == ba.ties);
  const Deviation x({0.3, -0.1, -0.2}), y({-0.2, 0.3, -0.1});
  const auto xy = simulate_match(x, y, d, c), yx = simulate_match(y, x, d, c);
  CHECK(xy.wins_a == yx.wins_b);
  CHECK(xy.wins_b == yx.wins_a);
}

TEST_CASE("results do not depend on the thread count") {
  const DieSpec d = DieSpec::uniform(3);
  const TokenAllocation a({10, 11, 9}), b({12, 9, 9});
  SimConfig c{300000, 5, 1};
  const auto one = simulate_match(a, b, d, c);
  for (unsigned t : {2u, 3u, 8u}) {
    c.threads = t;
    const auto many = simulate_match(a, b, d, c);
    CHECK(many.wins_a == one.wins_a);
    CHECK(many.wins_b == one.wins_b);
    CHECK(many.ties == one.ties);
    const auto l1 = simulate_last_bin(GaussianRace(d, {0.1, 0.0, -0.1}), {c.trials, 5, 1});
    const auto lt = simulate_last_bin(GaussianRace(d, {0.1, 0.0, -0.1}), c);
    CHECK(l1.counts == lt.counts);
  }
  c.threads = 1;
  const auto again = simulate_match(a, b, d, c);
  CHECK(again.wins_a == one.wins_a);
  c.seed = 6;
  CHECK(simulate_match(a, b, d, c).wins_a != one.wins_a);
}

TEST_CASE("simulate_last_bin examples") {
  const std::uint64_t n = 1000000;
  const auto l11 = simulate_last_bin(PoissonRace(DieSpec::uniform(2), {1, 1}), {n, 1, 1});
  CHECK(l11.counts[0] + l11.counts[1] == n);
  CHECK(std::abs(l11.frequencies()[0] - 0.5) <= 4 * oracle::binomial_se(0.5, n));
  const auto l21 = simulate_last_bin(PoissonRace(DieSpec::uniform(2), {2, 1}), {n, 2, 1});
  CHECK(std::abs(l21.frequencies()[0] - 0.75) <= 4 * oracle::binomial_se(0.75, n));
  const auto g = simulate_last_bin(GaussianRace(DieSpec::uniform(3), {0, 0, 0}), {n, 3, 1});
  for (double f : g.frequencies()) CHECK(std::abs(f - 1.0 / 3) <= 4 * oracle::binomial_se(1.0 / 3, n));
}

TEST_CASE("roll cap, streams and configuration") {
  CHECK(roll_cap(180, DieSpec::uniform(3)) == 54000);
  CHECK(roll_cap(10, DieSpec({0.1, 0.9})) == 10000);
  std::set<std::uint64_t> seeds;
  for (std::uint64_t chunk = 0; chunk < 1000; ++chunk) seeds.insert(stream_seed(9, chunk));
  CHECK(seeds.size() == 1000);
  CHECK(stream_seed(1, 0) != stream_seed(2, 0));
  CHECK_THROWS_AS(SimConfig({0, 1, 1}).validate(), ValidationError);
  CHECK_THROWS_AS(simulate_match(TokenAllocation({1, 1}), TokenAllocation({2, 1}),
                                 DieSpec::uniform(2), {10, 1, 1}),
                  ValidationError);
}
