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

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "randpivot/error.hpp"
#include "randpivot/weights.hpp"

using namespace randpivot;

namespace {

// Binomial(m, p) pmf by convolving m Bernoulli(p) laws; shares nothing with
// the library's recurrence or log-space path.
std::vector<long double> binomial_pmf_by_convolution(unsigned m, long double p) {
  std::vector<long double> pmf{1.0L};
  for (unsigned j = 0; j < m; ++j) {
    std::vector<long double> next(pmf.size() + 1, 0.0L);
    for (std::size_t k = 0; k < pmf.size(); ++k) {
      next[k] += pmf[k] * (1.0L - p);
      next[k + 1] += pmf[k] * p;
    }
    pmf.swap(next);
  }
  return pmf;
}

long double central_moment_oracle(unsigned n, unsigned m, unsigned k) {
  const auto pmf = binomial_pmf_by_convolution(m, 1.0L / n);
  const long double mean = static_cast<long double>(m) / n;
  long double s = 0.0L;
  for (std::size_t j = 0; j < pmf.size(); ++j) s += pmf[j] * std::pow(static_cast<long double>(j) - mean, k);
  return s;
}

long double factorial(unsigned k) {
  long double f = 1.0L;
  for (unsigned i = 2; i <= k; ++i) f *= i;
  return f;
}

// Independent enumeration of multinomial(m; 1/n, ..., 1/n) count vectors.
template <typename F>
void enumerate(unsigned n, unsigned m, F&& f) {
  std::vector<std::uint64_t> c(n, 0);
  auto rec = [&](auto&& self, unsigned i, unsigned left) -> void {
    if (i + 1 == n) {
      c[i] = left;
      long double coef = factorial(m);
      for (auto v : c) coef /= factorial(static_cast<unsigned>(v));
      f(c, coef / std::pow(static_cast<long double>(n), m));
      return;
    }
    for (unsigned v = 0; v <= left; ++v) {
      c[i] = v;
      self(self, i + 1, left - v);
    }
  };
  rec(rec, 0, m);
}

}  // namespace

TEST(DrawWeights, SingleCell) {
  CounterRng rng(1);
  const WeightVector w = draw_weights(1, 5, rng);
  ASSERT_EQ(w.n(), 1u);
  EXPECT_EQ(w[0], 5u);
}

TEST(DrawWeights, SumInvariant) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    CounterRng rng(derive_stream(seed, {}));
    const WeightVector w = draw_weights(4, 8, rng);
    ASSERT_EQ(w.n(), 4u);
    std::uint64_t s = 0;
    for (auto c : w.counts()) s += c;
    EXPECT_EQ(s, 8u);
    EXPECT_EQ(w.m(), 8u);
  }
}

TEST(DrawWeights, Deterministic) {
  CounterRng a(derive_stream(9, {1})), b(derive_stream(9, {1}));
  const WeightVector wa = draw_weights(50, 70, a);
  const WeightVector wb = draw_weights(50, 70, b);
  EXPECT_TRUE(std::equal(wa.counts().begin(), wa.counts().end(), wb.counts().begin()));
}

TEST(DrawWeights, EmpiricalPmfTwoByTwo) {
  CounterRng rng(derive_stream(11, {}));
  const int draws = 1000000;
  int c20 = 0, c11 = 0, c02 = 0;
  for (int i = 0; i < draws; ++i) {
    const WeightVector w = draw_weights(2, 2, rng);
    if (w[0] == 2) ++c20;
    else if (w[0] == 1) ++c11;
    else ++c02;
  }
  const auto check = [&](int count, double p) {
    const double se = std::sqrt(p * (1 - p) / draws);
    EXPECT_NEAR(static_cast<double>(count) / draws, p, 4 * se);
  };
  check(c20, 0.25);
  check(c11, 0.5);
  check(c02, 0.25);
}

TEST(DrawWeights, EmpiricalPmfMatchesExactThreeByThree) {
  std::map<std::vector<std::uint64_t>, int> hist;
  CounterRng rng(derive_stream(12, {}));
  const int draws = 1000000;
  for (int i = 0; i < draws; ++i) {
    const WeightVector w = draw_weights(3, 3, rng);
    ++hist[std::vector<std::uint64_t>(w.counts().begin(), w.counts().end())];
  }
  int atoms = 0;
  enumerate(3, 3, [&](const std::vector<std::uint64_t>& c, long double p) {
    ++atoms;
    const double pd = static_cast<double>(p);
    EXPECT_NEAR(multinomial_pmf(c), pd, 1e-15);
    const double se = std::sqrt(pd * (1 - pd) / draws);
    EXPECT_NEAR(static_cast<double>(hist[c]) / draws, pd, 4 * se);
  });
  EXPECT_EQ(atoms, 10);
}

TEST(WeightStats, HandExample) {
  const WeightVector w({2, 0});
  const WeightStats s = weight_stats(w);
  EXPECT_DOUBLE_EQ(s.sum_sq_dev, 0.5);
  EXPECT_DOUBLE_EQ(s.sum_abs_dev, 1.0);
  EXPECT_DOUBLE_EQ(s.sum_abs_cubed, 0.25);
  EXPECT_DOUBLE_EQ(s.max_ratio(), 0.5);
  EXPECT_FALSE(s.equal_weights);
}

TEST(WeightStats, EqualWeightsAreDegenerate) {
  const WeightVector w({3, 3, 3, 3});
  const WeightStats s = weight_stats(w);
  EXPECT_TRUE(s.equal_weights);
  EXPECT_EQ(s.sum_sq_dev, 0.0);
  EXPECT_EQ(s.sum_abs_dev, 0.0);
  EXPECT_THROW(s.max_ratio(), Error);
  try {
    (void)s.max_ratio();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DegenerateWeights);
  }
}

TEST(WeightStats, SumSqZeroIffEqual) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    CounterRng rng(derive_stream(seed, {77}));
    const WeightVector w = draw_weights(3, 6, rng);
    const WeightStats s = weight_stats(w);
    const bool equal = std::all_of(w.counts().begin(), w.counts().end(), [](auto c) { return c == 2; });
    EXPECT_EQ(s.equal_weights, equal);
    EXPECT_EQ(s.sum_sq_dev == 0.0, equal);
  }
}

TEST(WeightStats, PropertyInvariants) {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    CounterRng rng(derive_stream(seed, {78}));
    const std::uint64_t n = 2 + rng.below(40);
    const std::uint64_t m = 1 + rng.below(80);
    const WeightStats s = weight_stats(draw_weights(n, m, rng));
    EXPECT_GE(s.sum_sq_dev, 0.0);
    EXPECT_GE(s.sum_abs_dev, 0.0);
    EXPECT_GE(s.sum_abs_cubed, 0.0);
    EXPECT_LE(s.sum_abs_cubed, s.sum_abs_dev * s.max_sq_dev * (1 + 1e-12));
    if (!s.equal_weights) {
      EXPECT_GE(s.max_ratio(), 1.0 / static_cast<double>(n) * (1 - 1e-12));
      EXPECT_LE(s.max_ratio(), 1.0);
    }
  }
}

TEST(WeightStats, DenseAndSparseAgreeBitwise) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    CounterRng rng(derive_stream(seed, {79}));
    const std::uint64_t n = 100 + rng.below(2000);
    const std::uint64_t m = 1 + rng.below(3000);
    const WeightVector w = draw_weights(n, m, rng);
    const auto occ = w.nonzero();
    const WeightStats a = weight_stats(w);
    const WeightStats b = weight_stats(n, m, occ);
    EXPECT_EQ(a.sum_sq_dev, b.sum_sq_dev);
    EXPECT_EQ(a.sum_abs_dev, b.sum_abs_dev);
    EXPECT_EQ(a.sum_abs_cubed, b.sum_abs_cubed);
    EXPECT_EQ(a.max_sq_dev, b.max_sq_dev);
    EXPECT_EQ(a.occupied, occ.size());
  }
}

TEST(WeightStats, AccurateAgainstLongDouble) {
  CounterRng rng(derive_stream(4, {80}));
  const std::uint64_t n = 100000, m = 31623;
  const WeightVector w = draw_weights(n, m, rng);
  long double sq = 0.0L, ab = 0.0L;
  for (std::uint64_t i = 0; i < n; ++i) {
    const long double d = static_cast<long double>(w[i]) / m - 1.0L / n;
    sq += d * d;
    ab += std::fabs(d);
  }
  const WeightStats s = weight_stats(w);
  EXPECT_NEAR(s.sum_sq_dev, static_cast<double>(sq), 1e-13 * static_cast<double>(sq));
  EXPECT_NEAR(s.sum_abs_dev, static_cast<double>(ab), 1e-13 * static_cast<double>(ab));
}

TEST(WeightVector, RejectsWrongTotal) {
  EXPECT_THROW(WeightVector({1, 2}, 4), Error);
  EXPECT_THROW(WeightVector(std::vector<std::uint64_t>{}), Error);
}

TEST(ExactMoment, TrivialCases) {
  EXPECT_NEAR(exact_moment_w1(3, 6, 1), 0.0, 1e-15);
  EXPECT_NEAR(exact_moment_w1(3, 6, 2), 4.0 / 3.0, 1e-14);
}

TEST(ExactMoment, ClosedFormsLowOrder) {
  for (unsigned n : {2u, 3u, 7u, 50u}) {
    for (unsigned m : {1u, 5u, 30u, 61u, 200u}) {
      const double p = 1.0 / n, q = 1 - p, npq = m * p * q;
      EXPECT_NEAR(exact_moment_w1(n, m, 2), npq, 1e-12 * std::max(1.0, npq));
      EXPECT_NEAR(exact_moment_w1(n, m, 3), npq * (1 - 2 * p), 1e-12 * std::max(1.0, npq));
      const double k4 = 3 * npq * npq + npq * (1 - 6 * p * q);
      EXPECT_NEAR(exact_moment_w1(n, m, 4), k4, 1e-12 * std::max(1.0, k4));
    }
  }
}

TEST(ExactMoment, MatchesConvolutionOracle) {
  for (unsigned n : {2u, 5u, 10u, 100u, 1000u}) {
    for (unsigned m : {1u, 2u, 10u, 40u, 60u, 61u, 150u, 400u}) {
      for (unsigned k : {2u, 5u, 6u}) {
        const double oracle = static_cast<double>(central_moment_oracle(n, m, k));
        const double got = exact_moment_w1(n, m, k);
        EXPECT_NEAR(got, oracle, 1e-10 * std::max(1.0, std::fabs(oracle))) << n << " " << m << " " << k;
      }
    }
  }
}

TEST(ExactMoment, LargeMOverflows) {
  EXPECT_NO_THROW(exact_moment_w1(100, 10000, 6));
  try {
    exact_moment_w1(100, 10001, 6);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Overflow);
  }
}

TEST(ExactAbsDev, ClosedForm) {
  EXPECT_EQ(exact_expectation_abs_dev(1), 0.0);
  EXPECT_DOUBLE_EQ(exact_expectation_abs_dev(2), 0.5);
  EXPECT_NEAR(exact_expectation_abs_dev(10000000), 2.0 / std::exp(1.0), 1e-6);
}

TEST(Enumeration, VisitsEveryCompositionOnce) {
  for (unsigned n = 1; n <= 5; ++n) {
    for (unsigned m = 1; m <= 6; ++m) {
      long double total = 0.0L;
      std::size_t count = 0;
      for_each_weight_vector(n, m, [&](const WeightVector& w, double p) {
        EXPECT_EQ(w.n(), n);
        EXPECT_EQ(w.m(), m);
        total += p;
        ++count;
      });
      // C(m + n - 1, n - 1)
      const double expected = std::round(std::exp(std::lgamma(m + n) - std::lgamma(m + 1) - std::lgamma(n)));
      EXPECT_EQ(count, static_cast<std::size_t>(expected));
      EXPECT_NEAR(static_cast<double>(total), 1.0, 1e-13);
    }
  }
}

TEST(Enumeration, ProbabilitiesMatchIndependentEnumeration) {
  std::map<std::vector<std::uint64_t>, double> lib;
  for_each_weight_vector(4, 5, [&](const WeightVector& w, double p) {
    lib[std::vector<std::uint64_t>(w.counts().begin(), w.counts().end())] = p;
  });
  enumerate(4, 5, [&](const std::vector<std::uint64_t>& c, long double p) {
    EXPECT_NEAR(lib.at(c), static_cast<double>(p), 1e-15);
  });
}

TEST(Enumeration, ExpectedSumSqDevIdentity) {
  for (unsigned n = 1; n <= 5; ++n) {
    for (unsigned m = 1; m <= 6; ++m) {
      long double e = 0.0L;
      enumerate(n, m, [&](const std::vector<std::uint64_t>& c, long double p) {
        e += p * weight_stats(WeightVector(c)).sum_sq_dev;
      });
      EXPECT_NEAR(static_cast<double>(e), (1.0 - 1.0 / n) / m, 1e-12) << n << " " << m;
    }
  }
  long double e = 0.0L;
  enumerate(5, 4, [&](const std::vector<std::uint64_t>& c, long double p) {
    e += p * weight_stats(WeightVector(c)).sum_sq_dev;
  });
  EXPECT_NEAR(static_cast<double>(e), 0.2, 1e-12);
}

TEST(Enumeration, ExpectedAbsDevIdentity) {
  for (unsigned n = 1; n <= 6; ++n) {
    long double e = 0.0L;
    enumerate(n, n, [&](const std::vector<std::uint64_t>& c, long double p) {
      e += p * weight_stats(WeightVector(c)).sum_abs_dev;
    });
    EXPECT_NEAR(static_cast<double>(e), exact_expectation_abs_dev(n), 1e-12) << n;
  }
}

TEST(Enumeration, RejectsHugeSpaces) { EXPECT_THROW(for_each_weight_vector(30, 30, [](auto&&, double) {}), Error); }

TEST(MaxRatio, ShrinksWithN) {
  auto p99 = [](std::uint64_t n, int reps) {
    std::vector<double> r;
    for (int i = 0; i < reps; ++i) {
      CounterRng rng(derive_stream(n, {static_cast<std::uint64_t>(i)}));
      const WeightStats s = weight_stats(draw_weights(n, n, rng));
      if (!s.equal_weights) r.push_back(s.max_ratio());
    }
    std::sort(r.begin(), r.end());
    return r[static_cast<std::size_t>(0.99 * (r.size() - 1))];
  };
  EXPECT_LT(p99(10000, 300), p99(100, 300));
}
