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

#include "randpivot/weights.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "randpivot/error.hpp"
#include "randpivot/summation.hpp"

namespace randpivot {

namespace {

std::uint64_t checked_sum(const std::vector<std::uint64_t>& counts) {
  std::uint64_t total = 0;
  for (std::uint64_t c : counts) {
    if (__builtin_add_overflow(total, c, &total)) {
      throw Error(ErrorCode::Overflow, "weight counts overflow 64 bits");
    }
  }
  return total;
}

}  // namespace

WeightVector::WeightVector(std::vector<std::uint64_t> counts) : counts_(std::move(counts)) {
  if (counts_.empty()) throw Error(ErrorCode::BadParams, "weight vector needs n >= 1 cells");
  m_ = checked_sum(counts_);
  if (m_ == 0) throw Error(ErrorCode::BadParams, "weight vector needs m >= 1");
}

WeightVector::WeightVector(std::vector<std::uint64_t> counts, std::uint64_t m)
    : WeightVector(std::move(counts)) {
  if (m_ != m) {
    throw Error(ErrorCode::BadParams,
                "counts sum to " + std::to_string(m_) + ", expected m = " + std::to_string(m));
  }
}

std::vector<IndexCount> WeightVector::nonzero() const {
  std::vector<IndexCount> out;
  for (std::uint64_t i = 0; i < counts_.size(); ++i) {
    if (counts_[i] != 0) out.push_back({i, counts_[i]});
  }
  return out;
}

double WeightStats::max_ratio() const {
  if (equal_weights || sum_sq_dev <= 0.0) {
    throw Error(ErrorCode::DegenerateWeights, "max ratio undefined for equal weights");
  }
  return max_sq_dev / sum_sq_dev;
}

WeightVector draw_weights(std::uint64_t n, std::uint64_t m, CounterRng& rng) {
  if (n == 0 || m == 0) throw Error(ErrorCode::BadParams, "draw_weights needs n, m >= 1");
  std::vector<std::uint64_t> counts(n, 0);
  draw_indices(n, m, rng, [&](std::uint64_t i) { ++counts[i]; });
  return WeightVector(std::move(counts), m);
}

double weight_deviation(std::uint64_t count, std::uint64_t n, std::uint64_t m) {
  const int128 num = static_cast<int128>(count) * n - static_cast<int128>(m);
  return static_cast<double>(num) / (static_cast<double>(m) * static_cast<double>(n));
}

WeightStats weight_stats(std::uint64_t n, std::uint64_t m, std::span<const IndexCount> occupied) {
  if (n == 0 || m == 0) throw Error(ErrorCode::BadParams, "weight_stats needs n, m >= 1");
  WeightStats s;
  s.n = n;
  s.m = m;
  s.occupied = occupied.size();

  CompensatedSum<double> sq, ab, cu;
  bool all_equal = occupied.size() == n;
  std::uint64_t total = 0;
  for (const IndexCount& c : occupied) {
    const double d = weight_deviation(c.count, n, m);
    const double d2 = d * d;
    sq += d2;
    ab += std::abs(d);
    cu += d2 * std::abs(d);
    s.max_sq_dev = std::max(s.max_sq_dev, d2);
    if (static_cast<int128>(c.count) * n != static_cast<int128>(m)) all_equal = false;
    total += c.count;
  }
  if (total != m) throw Error(ErrorCode::BadParams, "occupied counts do not sum to m");

  const std::uint64_t empty = n - occupied.size();
  if (empty > 0) {
    const double d0 = weight_deviation(0, n, m);
    const double e = static_cast<double>(empty);
    sq += e * (d0 * d0);
    ab += e * std::abs(d0);
    cu += e * (d0 * d0 * std::abs(d0));
    s.max_sq_dev = std::max(s.max_sq_dev, d0 * d0);
  }
  s.equal_weights = all_equal;
  if (all_equal) {
    s.sum_sq_dev = s.sum_abs_dev = s.sum_abs_cubed = s.max_sq_dev = 0.0;
  } else {
    s.sum_sq_dev = sq.value();
    s.sum_abs_dev = ab.value();
    s.sum_abs_cubed = cu.value();
  }
  return s;
}

WeightStats weight_stats(const WeightVector& w) {
  const auto occ = w.nonzero();
  return weight_stats(w.n(), w.m(), occ);
}

double exact_moment_w1(std::uint64_t n, std::uint64_t m, unsigned k) {
  if (n == 0 || m == 0 || k == 0) throw Error(ErrorCode::BadParams, "exact_moment_w1 needs n, m, k >= 1");
  if (m > 10000) throw Error(ErrorCode::Overflow, "exact_moment_w1 caps m at 10^4");
  if (n == 1) return 0.0;  // w_1 == m surely

  const long double p = 1.0L / static_cast<long double>(n);
  const long double q = 1.0L - p;
  const long double mean = static_cast<long double>(m) * p;
  CompensatedSum<long double> acc;

  if (m <= 60) {
    long double pmf = std::pow(q, static_cast<long double>(m));
    for (std::uint64_t j = 0; j <= m; ++j) {
      acc += pmf * std::pow(static_cast<long double>(j) - mean, static_cast<long double>(k));
      pmf *= static_cast<long double>(m - j) / static_cast<long double>(j + 1) * (p / q);
    }
  } else {
    const long double lm = std::lgamma(static_cast<long double>(m) + 1.0L);
    const long double lp = std::log(p);
    const long double lq = std::log1p(-p);
    for (std::uint64_t j = 0; j <= m; ++j) {
      const long double lj = static_cast<long double>(j);
      const long double lpmf = lm - std::lgamma(lj + 1.0L) -
                               std::lgamma(static_cast<long double>(m - j) + 1.0L) + lj * lp +
                               static_cast<long double>(m - j) * lq;
      acc += std::exp(lpmf) * std::pow(lj - mean, static_cast<long double>(k));
    }
  }
  return static_cast<double>(acc.value());
}

double exact_expectation_abs_dev(std::uint64_t n) {
  if (n == 0) throw Error(ErrorCode::BadParams, "exact_expectation_abs_dev needs n >= 1");
  const double nd = static_cast<double>(n);
  return 2.0 * std::pow(1.0 - 1.0 / nd, nd);
}

double multinomial_pmf(std::span<const std::uint64_t> counts) {
  if (counts.empty()) throw Error(ErrorCode::BadParams, "multinomial_pmf needs n >= 1");
  const std::uint64_t m = std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
  const long double n = static_cast<long double>(counts.size());
  if (m <= 60) {
    // m! / prod w_i! as a product of binomial coefficients, times n^-m.
    long double coef = 1.0L;
    std::uint64_t remaining = m;
    for (std::uint64_t c : counts) {
      for (std::uint64_t j = 1; j <= c; ++j) {
        coef *= static_cast<long double>(remaining - c + j) / static_cast<long double>(j);
      }
      remaining -= c;
    }
    return static_cast<double>(coef * std::pow(n, -static_cast<long double>(m)));
  }
  long double lp = std::lgamma(static_cast<long double>(m) + 1.0L);
  for (std::uint64_t c : counts) lp -= std::lgamma(static_cast<long double>(c) + 1.0L);
  lp -= static_cast<long double>(m) * std::log(n);
  return static_cast<double>(std::exp(lp));
}

void for_each_weight_vector(std::uint64_t n, std::uint64_t m,
                            const std::function<void(const WeightVector&, double)>& visit) {
  if (n == 0 || m == 0) throw Error(ErrorCode::BadParams, "enumeration needs n, m >= 1");
  // C(m+n-1, n-1), guarded against blow-up.
  long double size = 1.0L;
  for (std::uint64_t j = 1; j < n; ++j) {
    size *= static_cast<long double>(m + j) / static_cast<long double>(j);
  }
  if (size > 1e7L) throw Error(ErrorCode::BadParams, "enumeration larger than 10^7 vectors");

  std::vector<std::uint64_t> counts(n, 0);
  // Depth-first over the first n-1 cells; the last cell takes the remainder.
  std::function<void(std::uint64_t, std::uint64_t)> rec = [&](std::uint64_t cell, std::uint64_t left) {
    if (cell + 1 == n) {
      counts[cell] = left;
      WeightVector w(counts, m);
      visit(w, multinomial_pmf(counts));
      return;
    }
    for (std::uint64_t c = 0; c <= left; ++c) {
      counts[cell] = c;
      rec(cell + 1, left - c);
    }
  };
  rec(0, m);
}

}  // namespace randpivot
