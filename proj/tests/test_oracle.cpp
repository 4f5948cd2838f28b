/*
 * Copyright 2026 The macdo-sim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "macdo/oracle.hpp"

#include <random>

using namespace macdo;

TEST_CASE("row-by-column and outer-product forms agree") {
  std::mt19937_64 gen(1);
  std::uniform_int_distribution<int> d(-15, 15);
  for (int trial = 0; trial < 100; ++trial) {
    const int m = 1 + trial % 9;
    const int k = 1 + trial % 31;
    const int n = 1 + trial % 5;
    IntMatrix a(m, k);
    IntMatrix b(k, n);
    for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = d(gen);
    for (Eigen::Index i = 0; i < b.size(); ++i) b.data()[i] = d(gen);
    const WideMatrix c = oracle::gemm_exact(a, b);
    CHECK(c == oracle::gemm_outer(a, b));
    std::int64_t manual = 0;
    for (int t = 0; t < k; ++t) manual += static_cast<std::int64_t>(a(0, t)) * b(t, 0);
    CHECK(c(0, 0) == manual);
  }
}

TEST_CASE("accumulation is 64-bit") {
  const IntMatrix a = IntMatrix::Constant(1, 4, 2'000'000'000);
  const IntMatrix b = IntMatrix::Constant(4, 1, 2);
  CHECK(oracle::gemm_exact(a, b)(0, 0) == 16'000'000'000LL);
  CHECK(oracle::kInt32SafeK == 2147483647LL / 120);
}

TEST_CASE("shape checks") {
  CHECK_THROWS_AS(oracle::gemm_exact(IntMatrix::Ones(2, 3), IntMatrix::Ones(2, 3)), ShapeError);
  CHECK(oracle::gemm_exact(IntMatrix(0, 3), IntMatrix::Ones(3, 2)).rows() == 0);
}

TEST_CASE("direct convolution") {
  // 1 channel, 3x3 input, 2x2 kernel of ones, padding 1, stride 2.
  ConvLayerSpec l{1, 3, 3, 2, 1, 2, 1};
  IntTensor act({1, 3, 3});
  for (int i = 0; i < 9; ++i) act.data[static_cast<std::size_t>(i)] = i + 1;
  IntTensor filt({1, 1, 2, 2}, 1);
  const auto out = oracle::conv_exact(l, act, filt);
  REQUIRE(out.shape == std::vector<std::size_t>{1, 2, 2});
  CHECK(out(0, 0, 0) == 1);
  CHECK(out(0, 0, 1) == 2 + 3);
  CHECK(out(0, 1, 0) == 4 + 7);
  CHECK(out(0, 1, 1) == 5 + 6 + 8 + 9);
  CHECK_THROWS_AS(oracle::conv_exact(l, IntTensor({1, 3, 4}), filt), ShapeError);
}

TEST_CASE("closed form with offsets") {
  const std::vector<int> in = {1, 2};
  const std::vector<int> w = {3, -1};
  CHECK(static_cast<double>(oracle::mismatch_closed_form(in, w, 0.1L, 8.0L)) == doctest::Approx(26.8));
  CHECK(oracle::mismatch_closed_form(in, w, 0.0L, 0.0L) == 1.0L);
  CHECK_THROWS_AS(oracle::mismatch_closed_form(in, std::vector<int>{1}, 0.0L, 0.0L), ShapeError);
}
