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

#ifndef RANDPIVOT_INTERVALS_HPP
#define RANDPIVOT_INTERVALS_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>

#include "randpivot/pivots.hpp"
#include "randpivot/weights.hpp"

namespace randpivot {

enum class Target { PopulationMean, SampleMean, EDFValue, DFValue };

/// Upper means the pivot is bounded above, {pivot <= z_alpha}; for the
/// target this gives [center - half_width, +inf). Lower is the mirror image
/// and TwoSided uses z_{alpha/2} on both ends.
enum class Sidedness { TwoSided, Upper, Lower };

std::string_view to_string(Target t) noexcept;
std::string_view to_string(Sidedness s) noexcept;
Sidedness parse_sidedness(std::string_view text);

struct IntervalMeta {
  std::uint64_t n = 0;
  std::uint64_t m = 0;
  std::string pivot;
  double raw_lower = 0.0;  ///< before clamping to [0,1] (EDF targets only)
  double raw_upper = 0.0;
  bool clamped = false;
  std::string note;
};

/// For two-sided intervals lower == center - half_width and
/// upper == center + half_width. One-sided intervals keep the finite
/// half_width and put +-inf on the open end.
struct ConfidenceInterval {
  Target target = Target::PopulationMean;
  double level = 0.0;
  Sidedness sided = Sidedness::TwoSided;
  double lower = 0.0;
  double upper = 0.0;
  double center = 0.0;
  double half_width = 0.0;
  double critical = 0.0;  ///< the normal quantile used
  IntervalMeta meta;

  bool contains(double v) const noexcept { return lower <= v && v <= upper; }
};

/// Standard normal distribution function.
double normal_cdf(double x);

/// Inverse standard normal distribution function (Wichura's AS 241,
/// PPND16). Relative accuracy about 1e-16 on (0, 1).
double normal_quantile(double p);

/// z with P(Z >= z) = alpha_half. Throws BadParams outside (0, 1).
double critical_z(double alpha_half);

/// z_{alpha/2} for two-sided intervals, z_alpha for one-sided ones.
double critical_value(double alpha, Sidedness sided);

/// Builds an interval from a center and the normal-quantile half width.
ConfidenceInterval make_interval(Target target, double alpha, Sidedness sided, double center,
                                 double scale);

struct CiOptions {
  Sidedness sided = Sidedness::TwoSided;
  ScaleConvention scale = ScaleConvention::Population;  ///< for the G1 variant only
};

/// Interval for the population mean around the ratio estimator:
///   center = sum |d_i| x_i / sum |d_i|
///   half_width = z * S * sqrt(sum d_i^2) / sum |d_i|
/// with S = S_n (variant G1) or S_{m,n} (variant G2).
ConfidenceInterval ci_mu(std::span<const double> x, const WeightVector& w, double alpha,
                         PivotKind variant, CiOptions opts = {});

/// Interval for the sample mean from the randomized mean and variance only:
///   center = rmean, half_width = z * sqrt(rvar) * sqrt(sum d_i^2).
/// The same numbers form an interval for mu + (mean - mu).
ConfidenceInterval ci_xbar(double rmean, double rvar, const WeightStats& ws, double alpha,
                           Sidedness sided = Sidedness::TwoSided);
ConfidenceInterval ci_xbar(const RandomizedStats& rs, const WeightStats& ws, double alpha,
                           Sidedness sided = Sidedness::TwoSided);
ConfidenceInterval ci_xbar(const SubsampleStats& ss, const WeightStats& ws, double alpha,
                           Sidedness sided = Sidedness::TwoSided);

// ---------------------------------------------------------------------------
// Sub-sample sizing
// ---------------------------------------------------------------------------

struct PowerDelta {
  double delta;  ///< in (0, 1/2): m = n^{1/2 + delta}
};
struct LogLog {};  ///< m = n^{1/2} ln ln n
struct Fixed {
  std::uint64_t m;
};
using SizingPolicy = std::variant<PowerDelta, LogLog, Fixed>;

/// "power-delta:0.25", "loglog", "fixed:1000" or a bare integer.
SizingPolicy parse_sizing_policy(std::string_view text);
std::string to_string(const SizingPolicy& p);

/// m_n for a policy, rounded half-to-even and clamped to [2, n^2 - 1].
/// Throws DomainError for LogLog with n <= e, BadParams for delta outside
/// (0, 1/2) or n < 2.
std::uint64_t subsample_size(std::uint64_t n, const SizingPolicy& policy);

}  // namespace randpivot

#endif  // RANDPIVOT_INTERVALS_HPP
