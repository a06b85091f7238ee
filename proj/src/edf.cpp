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

#include "randpivot/edf.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "randpivot/error.hpp"
#include "randpivot/summation.hpp"

namespace randpivot {

namespace {

void check_lengths(std::span<const double> data, const WeightVector& w) {
  if (data.size() != w.n()) throw Error(ErrorCode::BadParams, "data length does not match weight length");
}

void clamp_unit(ConfidenceInterval& ci) {
  ci.meta.raw_lower = ci.lower;
  ci.meta.raw_upper = ci.upper;
  const double lo = std::clamp(ci.lower, 0.0, 1.0);
  const double hi = std::clamp(ci.upper, 0.0, 1.0);
  ci.meta.clamped = lo != ci.lower || hi != ci.upper;
  ci.lower = lo;
  ci.upper = hi;
}

}  // namespace

EdfPoint edf_point(std::span<const double> data, const WeightVector& w, double x) {
  check_lengths(data, w);
  const std::uint64_t n = w.n();
  const std::uint64_t m = w.m();
  std::uint64_t below = 0;
  std::uint64_t weighted_below = 0;
  CompensatedSum<double> abs_num, abs_den;
  for (std::uint64_t i = 0; i < n; ++i) {
    const bool ind = data[i] <= x;
    const double a = std::abs(weight_deviation(w[i], n, m));
    abs_den += a;
    if (ind) {
      ++below;
      weighted_below += w[i];
      abs_num += a;
    }
  }
  if (abs_den.value() == 0.0) throw Error(ErrorCode::DegenerateWeights, "all weights equal m/n");

  EdfPoint p;
  p.x = x;
  p.f_n = static_cast<double>(below) / static_cast<double>(n);
  p.f_mn = static_cast<double>(weighted_below) / static_cast<double>(m);
  p.f_hat = std::clamp(abs_num.value() / abs_den.value(), 0.0, 1.0);
  p.s2_mn = p.f_mn * (1.0 - p.f_mn);
  return p;
}

double randomized_edf(std::span<const IndexCount> occupied, std::span<const double> values, double x) {
  if (occupied.size() != values.size()) throw Error(ErrorCode::BadParams, "values must align with occupied cells");
  std::uint64_t m = 0;
  std::uint64_t hit = 0;
  for (std::size_t j = 0; j < occupied.size(); ++j) {
    m += occupied[j].count;
    if (values[j] <= x) hit += occupied[j].count;
  }
  if (m == 0) throw Error(ErrorCode::BadParams, "empty subsample");
  return static_cast<double>(hit) / static_cast<double>(m);
}

std::string_view to_string(EdfPivotKind k) noexcept {
  switch (k) {
    case EdfPivotKind::Hat1: return "hat1";
    case EdfPivotKind::Hat2: return "hat2";
    case EdfPivotKind::HatHat1: return "hathat1";
    case EdfPivotKind::HatHat2: return "hathat2";
  }
  return "?";
}

EdfPivotKind parse_edf_pivot_kind(std::string_view text) {
  std::string s(text);
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (s == "hat1") return EdfPivotKind::Hat1;
  if (s == "hat2") return EdfPivotKind::Hat2;
  if (s == "hathat1") return EdfPivotKind::HatHat1;
  if (s == "hathat2") return EdfPivotKind::HatHat2;
  throw Error(ErrorCode::BadParams, "unknown EDF pivot '" + std::string(text) + "'");
}

double edf_pivot(EdfPivotKind kind, std::span<const double> data, const WeightVector& w, double x,
                 std::optional<double> F_x) {
  check_lengths(data, w);
  const bool centered = kind == EdfPivotKind::Hat2 || kind == EdfPivotKind::HatHat2;
  if (centered && !F_x) throw Error(ErrorCode::MissingF, std::string(to_string(kind)) + " needs F(x)");

  const WeightStats ws = weight_stats(w);
  if (ws.equal_weights) throw Error(ErrorCode::DegenerateWeights, "all weights equal m/n");
  const EdfPoint p = edf_point(data, w, x);
  const double f = (kind == EdfPivotKind::Hat1 || kind == EdfPivotKind::Hat2) ? p.f_n : p.f_mn;
  const double s2 = f * (1.0 - f);
  if (s2 == 0.0) throw Error(ErrorCode::ZeroScale, "F(1 - F) is zero at x");

  const std::uint64_t n = w.n();
  const std::uint64_t m = w.m();
  CompensatedSum<double> num;
  for (std::uint64_t i = 0; i < n; ++i) {
    const double d = weight_deviation(w[i], n, m);
    const double ind = data[i] <= x ? 1.0 : 0.0;
    num += centered ? std::abs(d) * (ind - *F_x) : d * ind;
  }
  return num.value() / (std::sqrt(s2) * std::sqrt(ws.sum_sq_dev));
}

ConfidenceInterval ci_edf(double f_mn, const WeightStats& ws, double alpha, Sidedness sided) {
  if (!(f_mn >= 0.0 && f_mn <= 1.0)) throw Error(ErrorCode::BadParams, "F_mn must lie in [0,1]");
  if (ws.equal_weights || !(ws.sum_sq_dev > 0.0)) {
    throw Error(ErrorCode::DegenerateWeights, "sum of squared weight deviations is zero");
  }
  const double s2 = f_mn * (1.0 - f_mn);
  if (s2 == 0.0) throw Error(ErrorCode::ZeroScale, "F_mn(x) is 0 or 1");
  ConfidenceInterval ci =
      make_interval(Target::EDFValue, alpha, sided, f_mn, std::sqrt(s2) * std::sqrt(ws.sum_sq_dev));
  ci.meta.n = ws.n;
  ci.meta.m = ws.m;
  ci.meta.pivot = "hathat1";
  ci.meta.note = "same interval covers F(x) + (F_n(x) - F(x))";
  clamp_unit(ci);
  return ci;
}

ConfidenceInterval ci_edf(std::span<const double> data, const WeightVector& w, double x, double alpha,
                          Sidedness sided) {
  check_lengths(data, w);
  const auto occ = w.nonzero();
  std::vector<double> vals;
  vals.reserve(occ.size());
  for (const IndexCount& c : occ) vals.push_back(data[c.index]);
  return ci_edf(randomized_edf(occ, vals, x), weight_stats(w), alpha, sided);
}

ConfidenceInterval ci_df(std::span<const double> data, const WeightVector& w, double x, double alpha,
                         Sidedness sided) {
  const WeightStats ws = weight_stats(w);
  if (ws.equal_weights) throw Error(ErrorCode::DegenerateWeights, "all weights equal m/n");
  const EdfPoint p = edf_point(data, w, x);
  if (p.s2_mn == 0.0) throw Error(ErrorCode::ZeroScale, "F_mn(x) is 0 or 1");
  ConfidenceInterval ci = make_interval(Target::DFValue, alpha, sided, p.f_hat,
                                        std::sqrt(p.s2_mn) * std::sqrt(ws.sum_sq_dev) / ws.sum_abs_dev);
  ci.meta.n = ws.n;
  ci.meta.m = ws.m;
  ci.meta.pivot = "hathat2";
  clamp_unit(ci);
  return ci;
}

double dkw_bound(std::uint64_t n, double eps) {
  if (n == 0) throw Error(ErrorCode::BadParams, "n must be positive");
  if (!(eps > 0.0)) throw Error(ErrorCode::BadParams, "eps must be positive");
  return std::min(1.0, 2.0 * std::exp(-2.0 * static_cast<double>(n) * eps * eps));
}

}  // namespace randpivot
