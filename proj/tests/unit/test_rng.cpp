// Copyright 2026 The redisc Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include <doctest.h>

#include <cmath>
#include <vector>

#include "redisc/rng.hpp"

using redisc::Rng;

TEST_CASE("same seed and stream give the same sequence") {
  Rng a(42, 3);
  Rng b(42, 3);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("streams and seeds are distinct") {
  Rng a(42, 1);
  Rng b(42, 2);
  Rng c(43, 1);
  int same_ab = 0;
  int same_ac = 0;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next_u64();
    same_ab += x == b.next_u64();
    same_ac += x == c.next_u64();
  }
  CHECK(same_ab == 0);
  CHECK(same_ac == 0);
}

TEST_CASE("uniform lies in [0,1) with mean near 1/2") {
  Rng r(7);
  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double u = r.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  // sd of the mean is sqrt(1/12/n)
  CHECK(std::abs(sum / n - 0.5) < 4.0 * std::sqrt(1.0 / 12.0 / n));
}

TEST_CASE("uniform_index covers the range without bias") {
  Rng r(9);
  std::vector<int> counts(5, 0);
  const int n = 50000;
  for (int i = 0; i < n; ++i) ++counts[r.uniform_index(5)];
  const double p = 0.2;
  const double sd = std::sqrt(n * p * (1 - p));
  for (int c : counts) CHECK(std::abs(c - n * p) < 4 * sd);
}

TEST_CASE("bernoulli endpoints") {
  Rng r(1);
  for (int i = 0; i < 100; ++i) {
    CHECK_FALSE(r.bernoulli(0.0));
    CHECK(r.bernoulli(1.0));
  }
}

TEST_CASE("categorical follows its weights and skips zero weights") {
  Rng r(5);
  const std::vector<double> w{0.0, 3.0, 1.0};
  std::vector<int> counts(3, 0);
  const int n = 40000;
  for (int i = 0; i < n; ++i) ++counts[r.categorical(w)];
  CHECK(counts[0] == 0);
  const double sd = std::sqrt(n * 0.25 * 0.75);
  CHECK(std::abs(counts[2] - n * 0.25) < 4 * sd);
}

TEST_CASE("normal has unit variance") {
  Rng r(11);
  double s = 0.0;
  double s2 = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double x = r.normal();
    s += x;
    s2 += x * x;
  }
  CHECK(std::abs(s / n) < 0.02);
  CHECK(std::abs(s2 / n - 1.0) < 0.03);
}

TEST_CASE("fork is deterministic and independent of the parent's position") {
  Rng a(3);
  Rng b(3);
  b.next_u64();
  Rng fa = a.fork(8);
  Rng fb = b.fork(8);
  CHECK(fa.next_u64() == fb.next_u64());
}

TEST_CASE("shuffle is a permutation") {
  Rng r(2);
  std::vector<int> v{0, 1, 2, 3, 4, 5, 6, 7};
  r.shuffle(v);
  std::vector<int> seen(8, 0);
  for (int x : v) ++seen[x];
  for (int c : seen) CHECK(c == 1);
}
