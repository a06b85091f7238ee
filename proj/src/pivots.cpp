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

#include "randpivot/pivots.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>
#include <vector>

#include "randpivot/error.hpp"
#include "randpivot/summation.hpp"

namespace randpivot {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

void check_lengths(std::span<const double> x, const WeightVector& w) {
  if (x.size() != w.n()) {
    throw Error(ErrorCode::BadParams, "data length " + std::to_string(x.size()) +
                                          " does not match weight length " + std::to_string(w.n()));
  }
}

}  // namespace

std::string_view to_string(PivotKind kind) noexcept {
  switch (kind) {
    case PivotKind::T1: return "t1";
    case PivotKind::T2: return "t2";
    case PivotKind::G1: return "g1";
    case PivotKind::G2: return "g2";
  }
  return "?";
}

PivotKind parse_pivot_kind(std::string_view text) {
  const std::string s = lower(text);
  if (s == "t1") return PivotKind::T1;
  if (s == "t2") return PivotKind::T2;
  if (s == "g1") return PivotKind::G1;
  if (s == "g2") return PivotKind::G2;
  throw Error(ErrorCode::BadParams, "unknown pivot kind '" + std::string(text) + "'");
}

std::string_view to_string(ScaleConvention c) noexcept {
  return c == ScaleConvention::Population ? "population" : "unbiased";
}

ScaleConvention parse_scale_convention(std::string_view text) {
  const std::string s = lower(text);
  if (s == "population" || s == "n") return ScaleConvention::Population;
  if (s == "unbiased" || s == "sample" || s == "n-1") return ScaleConvention::Unbiased;
  throw Error(ErrorCode::BadParams, "unknown scale convention '" + std::string(text) + "'");
}

double SampleStats::sd(ScaleConvention c) const {
  if (c == ScaleConvention::Population) return std::sqrt(var_biased);
  const double nd = static_cast<double>(n);
  return std::sqrt(var_biased * nd / (nd - 1.0));
}

SampleStats sample_stats(std::span<const double> x) {
  if (x.size() < 2) throw Error(ErrorCode::TooFewObservations, "need at least 2 observations");
  const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
  SampleStats s;
  s.n = x.size();
  if (*lo == *hi) {
    s.mean = *lo;
    s.var_biased = 0.0;
    return s;
  }
  CompensatedSum<double> sum;
  for (double v : x) sum += v;
  s.mean = std::clamp(sum.value() / static_cast<double>(s.n), *lo, *hi);
  CompensatedSum<double> ss;
  for (double v : x) ss += (v - s.mean) * (v - s.mean);
  s.var_biased = ss.value() / static_cast<double>(s.n);
  return s;
}

SubsampleStats subsample_stats(std::span<const IndexCount> occupied, std::span<const double> values) {
  if (occupied.size() != values.size() || occupied.empty()) {
    throw Error(ErrorCode::BadParams, "subsample values must align with a non-empty occupied set");
  }
  SubsampleStats s;
  s.distinct = occupied.size();
  double lo = values[0];
  double hi = values[0];
  for (double v : values) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  CompensatedSum<double> wx;
  for (std::size_t j = 0; j < occupied.size(); ++j) {
    s.m += occupied[j].count;
    wx += static_cast<double>(occupied[j].count) * values[j];
  }
  const double md = static_cast<double>(s.m);
  if (lo == hi) {
    s.rmean = lo;
    s.rvar = 0.0;
    return s;
  }
  s.rmean = std::clamp(wx.value() / md, lo, hi);
  CompensatedSum<double> ss;
  for (std::size_t j = 0; j < occupied.size(); ++j) {
    const double dv = values[j] - s.rmean;
    ss += static_cast<double>(occupied[j].count) * dv * dv;
  }
  s.rvar = ss.value() / md;
  return s;
}

double RandomizedStats::ratio_mean() const {
  if (!ratio_mean_value) {
    throw Error(ErrorCode::DegenerateWeights, "ratio mean undefined when all weights equal m/n");
  }
  return *ratio_mean_value;
}

RandomizedStats randomized_stats(std::span<const double> x, const WeightVector& w) {
  check_lengths(x, w);
  const auto occ = w.nonzero();
  std::vector<double> vals;
  vals.reserve(occ.size());
  for (const IndexCount& c : occ) vals.push_back(x[c.index]);
  const SubsampleStats sub = subsample_stats(occ, vals);

  RandomizedStats r;
  r.rmean = sub.rmean;
  r.rvar = sub.rvar;

  const std::uint64_t n = w.n();
  const std::uint64_t m = w.m();
  CompensatedSum<double> num, den;
  bool equal = true;
  for (std::uint64_t i = 0; i < n; ++i) {
    const double a = std::abs(weight_deviation(w[i], n, m));
    if (static_cast<int128>(w[i]) * n != static_cast<int128>(m)) equal = false;
    num += a * x[i];
    den += a;
  }
  if (!equal) {
    const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
    r.ratio_mean_value = std::clamp(num.value() / den.value(), *lo, *hi);
  }
  return r;
}

double signed_weighted_sum(std::span<const double> x, const WeightVector& w) {
  check_lengths(x, w);
  CompensatedSum<double> acc;
  for (std::uint64_t i = 0; i < w.n(); ++i) acc += weight_deviation(w[i], w.n(), w.m()) * x[i];
  return acc.value();
}

double abs_weighted_sum(std::span<const double> x, const WeightVector& w, double mu) {
  check_lengths(x, w);
  CompensatedSum<double> acc;
  for (std::uint64_t i = 0; i < w.n(); ++i) {
    acc += std::abs(weight_deviation(w[i], w.n(), w.m())) * (x[i] - mu);
  }
  return acc.value();
}

double pivot(PivotKind kind, std::span<const double> x, const WeightVector& w,
             std::optional<double> mu, PivotOptions opts) {
  check_lengths(x, w);
  if (needs_mu(kind) && !mu) {
    throw Error(ErrorCode::MissingMu, std::string(to_string(kind)) + " needs a hypothesized mean");
  }
  const SampleStats ss = sample_stats(x);
  const WeightStats ws = weight_stats(w);
  if (ws.equal_weights) throw Error(ErrorCode::DegenerateWeights, "all weights equal m/n");

  double scale = 0.0;
  if (uses_randomized_scale(kind)) {
    scale = std::sqrt(randomized_stats(x, w).rvar);
    if (scale == 0.0) throw Error(ErrorCode::ZeroScale, "randomized sample variance is zero");
  } else {
    scale = ss.sd(opts.scale);
    if (scale == 0.0) throw Error(ErrorCode::ZeroScale, "sample variance is zero");
  }

  const double numerator = needs_mu(kind) ? abs_weighted_sum(x, w, *mu) : signed_weighted_sum(x, w);
  return numerator / (scale * std::sqrt(ws.sum_sq_dev));
}

double classical_t(std::span<const double> x, double mu, ScaleConvention scale) {
  const SampleStats ss = sample_stats(x);
  const double sd = ss.sd(scale);
  if (sd == 0.0) throw Error(ErrorCode::ZeroScale, "sample variance is zero");
  return (ss.mean - mu) / (sd / std::sqrt(static_cast<double>(ss.n)));
}

}  // namespace randpivot
