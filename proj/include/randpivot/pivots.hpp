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

#ifndef RANDPIVOT_PIVOTS_HPP
#define RANDPIVOT_PIVOTS_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

#include "randpivot/weights.hpp"

namespace randpivot {

/// T-kinds are pivots for the sample mean, G-kinds for a hypothesized
/// population mean. Kind 1 studentizes with S_n, kind 2 with S_{m,n}.
enum class PivotKind { T1, T2, G1, G2 };

std::string_view to_string(PivotKind kind) noexcept;
/// Accepts "t1", "T1", ... Throws BadParams otherwise.
PivotKind parse_pivot_kind(std::string_view text);
constexpr bool needs_mu(PivotKind kind) noexcept {
  return kind == PivotKind::G1 || kind == PivotKind::G2;
}
constexpr bool uses_randomized_scale(PivotKind kind) noexcept {
  return kind == PivotKind::T2 || kind == PivotKind::G2;
}

/// Divisor used for the sample standard deviation S_n.
///
/// Population (divisor n) is the library default and the definition every
/// formula here is written against. Unbiased (divisor n - 1) matches what
/// R's sd() returns and is offered for simulation studies that need to line
/// up with results produced that way. Only S_n is affected; S_{m,n} always
/// divides by m.
enum class ScaleConvention { Population, Unbiased };

std::string_view to_string(ScaleConvention c) noexcept;
ScaleConvention parse_scale_convention(std::string_view text);

struct SampleStats {
  std::uint64_t n = 0;
  double mean = 0.0;
  double var_biased = 0.0;  ///< sum (x_i - mean)^2 / n. Note: divisor n, not n - 1.

  bool zero_variance() const noexcept { return var_biased == 0.0; }
  double sd(ScaleConvention c = ScaleConvention::Population) const;
};

/// Throws TooFewObservations for fewer than two values.
SampleStats sample_stats(std::span<const double> x);

/// Randomized mean/variance from the occupied cells only.
struct SubsampleStats {
  std::uint64_t m = 0;
  std::uint64_t distinct = 0;
  double rmean = 0.0;  ///< sum w_i x_i / m
  double rvar = 0.0;   ///< sum w_i (x_i - rmean)^2 / m
};

/// values[j] is the observation behind occupied[j]. Only cells with w_i > 0
/// enter, so this is all a big-data caller ever needs to fetch.
SubsampleStats subsample_stats(std::span<const IndexCount> occupied, std::span<const double> values);

struct RandomizedStats {
  double rmean = 0.0;
  double rvar = 0.0;
  std::optional<double> ratio_mean_value;  ///< empty when sum_abs_dev == 0

  /// sum |d_i| x_i / sum |d_i|. Throws DegenerateWeights for equal weights.
  double ratio_mean() const;
};

RandomizedStats randomized_stats(std::span<const double> x, const WeightVector& w);

/// sum (w_i/m - 1/n) x_i, i.e. rmean - mean.
double signed_weighted_sum(std::span<const double> x, const WeightVector& w);
/// sum |w_i/m - 1/n| (x_i - mu).
double abs_weighted_sum(std::span<const double> x, const WeightVector& w, double mu);

struct PivotOptions {
  ScaleConvention scale = ScaleConvention::Population;
};

/// Value of a randomized pivot.
///
///   T1 = sum d_i x_i        / (S_n     sqrt(sum d_i^2))
///   T2 = sum d_i x_i        / (S_{m,n} sqrt(sum d_i^2))
///   G1 = sum |d_i|(x_i - mu) / (S_n     sqrt(sum d_i^2))
///   G2 = sum |d_i|(x_i - mu) / (S_{m,n} sqrt(sum d_i^2))
///
/// with d_i = w_i/m - 1/n. Errors: MissingMu, DegenerateWeights, ZeroScale,
/// TooFewObservations, BadParams (length mismatch).
double pivot(PivotKind kind, std::span<const double> x, const WeightVector& w,
             std::optional<double> mu = std::nullopt, PivotOptions opts = {});

/// Classical Student pivot T_n(X - mu) = (mean - mu) / (S_n / sqrt(n)).
double classical_t(std::span<const double> x, double mu, ScaleConvention scale = ScaleConvention::Population);

}  // namespace randpivot

#endif  // RANDPIVOT_PIVOTS_HPP
