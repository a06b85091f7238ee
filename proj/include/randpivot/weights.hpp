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

#ifndef RANDPIVOT_WEIGHTS_HPP
#define RANDPIVOT_WEIGHTS_HPP

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "randpivot/rng.hpp"

namespace randpivot {

/// One occupied cell of a multinomial draw.
struct IndexCount {
  std::uint64_t index;
  std::uint64_t count;

  friend bool operator==(const IndexCount&, const IndexCount&) = default;
};

/// A multinomial(m; 1/n, ..., 1/n) realization: counts has n entries summing
/// to m. Immutable after construction.
class WeightVector {
 public:
  /// Takes m as the sum of counts. Throws BadParams if counts is empty or
  /// sums to zero.
  explicit WeightVector(std::vector<std::uint64_t> counts);
  /// Throws BadParams unless sum(counts) == m.
  WeightVector(std::vector<std::uint64_t> counts, std::uint64_t m);

  std::uint64_t n() const noexcept { return counts_.size(); }
  std::uint64_t m() const noexcept { return m_; }
  std::span<const std::uint64_t> counts() const noexcept { return counts_; }
  std::uint64_t operator[](std::size_t i) const noexcept { return counts_[i]; }

  /// Occupied cells in ascending index order.
  std::vector<IndexCount> nonzero() const;

 private:
  std::vector<std::uint64_t> counts_;
  std::uint64_t m_ = 0;
};

/// Functionals of d_i = w_i/m - 1/n that every pivot and bound needs.
///
/// All sums run over occupied cells in ascending index order with compensated
/// accumulation, and the (n - k) empty cells are added in closed form at the
/// end. Dense and sparse inputs therefore give bit-identical results.
struct WeightStats {
  std::uint64_t n = 0;
  std::uint64_t m = 0;
  std::uint64_t occupied = 0;  ///< number of cells with w_i > 0
  double sum_sq_dev = 0.0;     ///< sum (w_i/m - 1/n)^2
  double sum_abs_dev = 0.0;    ///< sum |w_i/m - 1/n|
  double sum_abs_cubed = 0.0;  ///< sum |w_i/m - 1/n|^3
  double max_sq_dev = 0.0;     ///< max_i (w_i/m - 1/n)^2
  bool equal_weights = false;  ///< every w_i * n == m

  /// max_i d_i^2 / sum d_i^2. Throws DegenerateWeights for equal weights.
  double max_ratio() const;
};

/// Draws m indices uniformly from [0, n) and calls sink(index) for each, in
/// draw order. This is the single index stream behind both draw_weights and
/// the big-data sampler.
template <typename Sink>
void draw_indices(std::uint64_t n, std::uint64_t m, CounterRng& rng, Sink&& sink) {
  for (std::uint64_t j = 0; j < m; ++j) sink(rng.below(n));
}

WeightVector draw_weights(std::uint64_t n, std::uint64_t m, CounterRng& rng);

WeightStats weight_stats(const WeightVector& w);
WeightStats weight_stats(std::uint64_t n, std::uint64_t m, std::span<const IndexCount> occupied);

/// w_i/m - 1/n evaluated as (w_i n - m) / (m n) so the numerator is exact.
double weight_deviation(std::uint64_t count, std::uint64_t n, std::uint64_t m);

// ---------------------------------------------------------------------------
// Exact oracles
// ---------------------------------------------------------------------------

/// Exact E(w_1 - m/n)^k, w_1 ~ Binomial(m, 1/n). Requires m <= 10^4
/// (Overflow otherwise). Uses a long-double pmf recurrence for m <= 60 and
/// log-space pmf terms with compensated summation above that.
double exact_moment_w1(std::uint64_t n, std::uint64_t m, unsigned k);

/// Closed form of E_w sum_i |w_i/n - 1/n| for m = n, i.e. 2(1 - 1/n)^n.
double exact_expectation_abs_dev(std::uint64_t n);

/// Probability of a specific count vector under multinomial(m; 1/n, ..., 1/n).
double multinomial_pmf(std::span<const std::uint64_t> counts);

/// Visits every count vector of length n summing to m together with its
/// probability. The number of vectors is C(m+n-1, n-1); BadParams above 10^7.
void for_each_weight_vector(std::uint64_t n, std::uint64_t m,
                            const std::function<void(const WeightVector&, double)>& visit);

}  // namespace randpivot

#endif  // RANDPIVOT_WEIGHTS_HPP
