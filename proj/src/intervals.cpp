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

#include "randpivot/intervals.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

#include "randpivot/error.hpp"

namespace randpivot {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <std::size_t N>
double horner(const double (&c)[N], double r) {
  double acc = c[N - 1];
  for (std::size_t i = N - 1; i-- > 0;) acc = acc * r + c[i];
  return acc;
}

// AS 241 coefficients, lowest order first.
constexpr double kA[] = {3.3871328727963666080e0,     1.3314166789178437745e+2,
                         1.9715909503065514427e+3,    1.3731693765509461125e+4,
                         4.5921953931549871457e+4,    6.7265770927008700853e+4,
                         3.3430575583588128105e+4,    2.5090809287301226727e+3};
constexpr double kB[] = {1.0,                         4.2313330701600911252e+1,
                         6.8718700749205790830e+2,    5.3941960214247511077e+3,
                         2.1213794301586595867e+4,    3.9307895800092710610e+4,
                         2.8729085735721942674e+4,    5.2264952788528545610e+3};
constexpr double kC[] = {1.42343711074968357734e0,    4.63033784615654529590e0,
                         5.76949722146069140550e0,    3.64784832476320460504e0,
                         1.27045825245236838258e0,    2.41780725177450611770e-1,
                         2.27238449892691845833e-2,   7.74545014278341407640e-4};
constexpr double kD[] = {1.0,                         2.05319162663775882187e0,
                         1.67638483018380384940e0,    6.89767334985100004550e-1,
                         1.48103976427480074590e-1,   1.51986665636164571966e-2,
                         5.47593808499534494600e-4,   1.05075007164441684324e-9};
constexpr double kE[] = {6.65790464350110377720e0,    5.46378491116411436990e0,
                         1.78482653991729133580e0,    2.96560571828504891230e-1,
                         2.65321895265761230930e-2,   1.24266094738807843860e-3,
                         2.71155556874348757815e-5,   2.01033439929228813265e-7};
constexpr double kF[] = {1.0,                         5.99832206555887937690e-1,
                         1.36929880922735805310e-1,   1.48753612908506148525e-2,
                         7.86869131145613259100e-4,   1.84631831751005468180e-5,
                         1.42151175831644588870e-7,   2.04426310338993978564e-15};

std::uint64_t round_half_even(double v) {
  // nearbyint honours the default round-to-nearest-even mode.
  return static_cast<std::uint64_t>(std::nearbyint(v));
}

}  // namespace

std::string_view to_string(Target t) noexcept {
  switch (t) {
    case Target::PopulationMean: return "population_mean";
    case Target::SampleMean: return "sample_mean";
    case Target::EDFValue: return "edf_value";
    case Target::DFValue: return "df_value";
  }
  return "?";
}

std::string_view to_string(Sidedness s) noexcept {
  switch (s) {
    case Sidedness::TwoSided: return "two-sided";
    case Sidedness::Upper: return "upper";
    case Sidedness::Lower: return "lower";
  }
  return "?";
}

Sidedness parse_sidedness(std::string_view text) {
  if (text == "two-sided" || text == "two" || text == "both") return Sidedness::TwoSided;
  if (text == "upper") return Sidedness::Upper;
  if (text == "lower") return Sidedness::Lower;
  throw Error(ErrorCode::BadParams, "sidedness must be two-sided, upper or lower");
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw Error(ErrorCode::BadParams, "normal quantile needs p in (0,1)");
  const double q = p - 0.5;
  if (std::abs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q * horner(kA, r) / horner(kB, r);
  }
  double r = q < 0.0 ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double val;
  if (r <= 5.0) {
    r -= 1.6;
    val = horner(kC, r) / horner(kD, r);
  } else {
    r -= 5.0;
    val = horner(kE, r) / horner(kF, r);
  }
  return q < 0.0 ? -val : val;
}

double critical_z(double alpha_half) {
  if (!(alpha_half > 0.0 && alpha_half < 1.0)) {
    throw Error(ErrorCode::BadParams, "alpha must lie in (0,1)");
  }
  return -normal_quantile(alpha_half);
}

double critical_value(double alpha, Sidedness sided) {
  return critical_z(sided == Sidedness::TwoSided ? alpha / 2.0 : alpha);
}

ConfidenceInterval make_interval(Target target, double alpha, Sidedness sided, double center,
                                 double scale) {
  ConfidenceInterval ci;
  ci.target = target;
  ci.level = 1.0 - alpha;
  ci.sided = sided;
  ci.center = center;
  ci.critical = critical_value(alpha, sided);
  // For alpha > 1/2 one-sided z is negative; the width never goes below 0.
  ci.half_width = std::max(0.0, ci.critical * scale);
  ci.lower = sided == Sidedness::Lower ? -kInf : center - ci.half_width;
  ci.upper = sided == Sidedness::Upper ? kInf : center + ci.half_width;
  ci.meta.raw_lower = ci.lower;
  ci.meta.raw_upper = ci.upper;
  return ci;
}

ConfidenceInterval ci_mu(std::span<const double> x, const WeightVector& w, double alpha,
                         PivotKind variant, CiOptions opts) {
  if (!needs_mu(variant)) throw Error(ErrorCode::BadParams, "ci_mu variant must be g1 or g2");
  if (x.size() != w.n()) throw Error(ErrorCode::BadParams, "data length does not match weights");
  const WeightStats ws = weight_stats(w);
  if (ws.equal_weights) throw Error(ErrorCode::DegenerateWeights, "all weights equal m/n");
  const RandomizedStats rs = randomized_stats(x, w);
  const double s = variant == PivotKind::G2 ? std::sqrt(rs.rvar) : sample_stats(x).sd(opts.scale);
  if (s == 0.0) throw Error(ErrorCode::ZeroScale, "scale estimate is zero");

  ConfidenceInterval ci = make_interval(Target::PopulationMean, alpha, opts.sided, rs.ratio_mean(),
                                        s * std::sqrt(ws.sum_sq_dev) / ws.sum_abs_dev);
  ci.meta.n = w.n();
  ci.meta.m = w.m();
  ci.meta.pivot = std::string(to_string(variant));
  return ci;
}

ConfidenceInterval ci_xbar(double rmean, double rvar, const WeightStats& ws, double alpha,
                           Sidedness sided) {
  if (ws.equal_weights || !(ws.sum_sq_dev > 0.0)) {
    throw Error(ErrorCode::DegenerateWeights, "sum of squared weight deviations is zero");
  }
  if (!(rvar > 0.0)) throw Error(ErrorCode::ZeroScale, "randomized variance is zero");
  ConfidenceInterval ci =
      make_interval(Target::SampleMean, alpha, sided, rmean, std::sqrt(rvar) * std::sqrt(ws.sum_sq_dev));
  ci.meta.n = ws.n;
  ci.meta.m = ws.m;
  ci.meta.pivot = "t2";
  ci.meta.note = "same interval covers mu + (sample mean - mu)";
  return ci;
}

ConfidenceInterval ci_xbar(const RandomizedStats& rs, const WeightStats& ws, double alpha, Sidedness sided) {
  return ci_xbar(rs.rmean, rs.rvar, ws, alpha, sided);
}

ConfidenceInterval ci_xbar(const SubsampleStats& ss, const WeightStats& ws, double alpha, Sidedness sided) {
  return ci_xbar(ss.rmean, ss.rvar, ws, alpha, sided);
}

SizingPolicy parse_sizing_policy(std::string_view text) {
  auto parse_u64 = [&](std::string_view s) {
    std::uint64_t v = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size() || v == 0) {
      throw Error(ErrorCode::BadParams, "bad subsample size '" + std::string(s) + "'");
    }
    return v;
  };
  if (text == "loglog") return LogLog{};
  if (text.starts_with("fixed:")) return Fixed{parse_u64(text.substr(6))};
  if (text.starts_with("power-delta:")) {
    const std::string arg(text.substr(12));
    std::size_t used = 0;
    double d = 0.0;
    try {
      d = std::stod(arg, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != arg.size()) throw Error(ErrorCode::BadParams, "bad delta '" + arg + "'");
    if (!(d > 0.0 && d < 0.5)) throw Error(ErrorCode::BadParams, "delta must lie in (0, 1/2)");
    return PowerDelta{d};
  }
  if (!text.empty() && std::isdigit(static_cast<unsigned char>(text.front()))) return Fixed{parse_u64(text)};
  throw Error(ErrorCode::BadParams,
              "sizing policy must be power-delta:D, loglog, fixed:M or an integer, got '" + std::string(text) +
                  "'");
}

std::string to_string(const SizingPolicy& p) {
  if (const auto* pd = std::get_if<PowerDelta>(&p)) {
    std::ostringstream os;
    os << pd->delta;
    return "power-delta:" + os.str();
  }
  if (std::holds_alternative<LogLog>(p)) return "loglog";
  return "fixed:" + std::to_string(std::get<Fixed>(p).m);
}

std::uint64_t subsample_size(std::uint64_t n, const SizingPolicy& policy) {
  if (n < 2) throw Error(ErrorCode::BadParams, "subsample sizing needs n >= 2");
  const double nd = static_cast<double>(n);
  std::uint64_t m = 0;
  if (const auto* pd = std::get_if<PowerDelta>(&policy)) {
    if (!(pd->delta > 0.0 && pd->delta < 0.5)) throw Error(ErrorCode::BadParams, "delta must lie in (0, 1/2)");
    m = round_half_even(std::pow(nd, 0.5 + pd->delta));
  } else if (std::holds_alternative<LogLog>(policy)) {
    if (!(nd > std::numbers::e)) throw Error(ErrorCode::DomainError, "ln ln n needs n > e");
    m = round_half_even(std::sqrt(nd) * std::log(std::log(nd)));
  } else {
    m = std::get<Fixed>(policy).m;
  }
  // n^2 - 1 saturates for n beyond 2^32.
  const std::uint64_t cap = n > 0xFFFFFFFFull ? std::numeric_limits<std::uint64_t>::max() : n * n - 1;
  return std::clamp<std::uint64_t>(m, 2, cap);
}

}  // namespace randpivot
