/*
 * Copyright (C) 2026 The randpivot Authors
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

#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <set>
#include <vector>

#include "randpivot/rng.hpp"

using namespace randpivot;

TEST(Philox, KnownAnswerZero) {
  const auto out = philox4x32_10({0, 0, 0, 0}, {0, 0});
  EXPECT_EQ(out, (std::array<std::uint32_t, 4>{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
}

TEST(Philox, KnownAnswerAllOnes) {
  const auto out = philox4x32_10({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff});
  EXPECT_EQ(out, (std::array<std::uint32_t, 4>{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
}

TEST(Philox, KnownAnswerPiDigits) {
  const auto out = philox4x32_10({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0});
  EXPECT_EQ(out, (std::array<std::uint32_t, 4>{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(Philox, UsableAtCompileTime) {
  constexpr auto out = philox4x32_10({0, 0, 0, 0}, {0, 0});
  static_assert(out[0] == 0x6627e8d5);
}

TEST(CounterRng, SameKeySameStream) {
  CounterRng a(42), b(42);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(a(), b());
}

TEST(CounterRng, CopyForks) {
  CounterRng a(7);
  for (int i = 0; i < 3; ++i) a();
  CounterRng b = a;
  for (int i = 0; i < 10; ++i) ASSERT_EQ(a(), b());
}

TEST(CounterRng, DerivedStreamsDiffer) {
  std::set<std::uint64_t> keys;
  for (std::uint64_t r = 0; r < 1000; ++r)
    for (std::uint64_t a = 0; a < 3; ++a) keys.insert(derive_stream(1, {r, a}));
  EXPECT_EQ(keys.size(), 3000u);
  EXPECT_NE(derive_stream(1, {}), derive_stream(2, {}));
  EXPECT_NE(derive_stream(1, {0}), derive_stream(1, {0, 0}));
}

TEST(CounterRng, UniformRanges) {
  CounterRng rng(derive_stream(3, {}));
  double sum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    const double v = rng.uniform_pos();
    ASSERT_GT(v, 0.0);
    ASSERT_LE(v, 1.0);
    sum += u;
  }
  // mean of U(0,1): sd of the average is sqrt(1/12/n)
  EXPECT_NEAR(sum / n, 0.5, 4.0 * std::sqrt(1.0 / 12.0 / n));
}

TEST(CounterRng, BelowIsUniform) {
  CounterRng rng(derive_stream(5, {}));
  const std::uint64_t k = 7;
  const int n = 700000;
  std::vector<int> counts(k, 0);
  for (int i = 0; i < n; ++i) {
    const auto v = rng.below(k);
    ASSERT_LT(v, k);
    ++counts[v];
  }
  double chi2 = 0.0;
  const double e = static_cast<double>(n) / k;
  for (int c : counts) chi2 += (c - e) * (c - e) / e;
  // chi-square with 6 df: P(> 22.46) = 0.001
  EXPECT_LT(chi2, 22.46);
}

TEST(CounterRng, BelowOne) {
  CounterRng rng(1);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(rng.below(1), 0u);
}
