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

#ifndef RANDPIVOT_EDF_HPP
#define RANDPIVOT_EDF_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

#include "randpivot/intervals.hpp"
#include "randpivot/weights.hpp"

namespace randpivot {

/// Distribution-function quantities at one point x. The indicator is
/// 1(X_i <= x), so every curve is right-continuous.
struct EdfPoint {
  double x = 0.0;
  double f_n = 0.0;    ///< (1/n) sum 1(X_i <= x)
  double f_mn = 0.0;   ///< sum (w_i/m) 1(X_i <= x)
  double f_hat = 0.0;  ///< sum |d_i| 1(X_i <= x) / sum |d_i|
  double s2_mn = 0.0;  ///< f_mn (1 - f_mn)
};

/// One pass over the data. Throws DegenerateWeights when all weights equal
/// m/n (f_hat undefined) and BadParams on a length mismatch.
EdfPoint edf_point(std::span<const double> data, const WeightVector& w, double x);

/// sum (w_i/m) 1(X_i <= x) from occupied cells only; values[j] belongs to
/// occupied[j].
double randomized_edf(std::span<const IndexCount> occupied, std::span<const double> values, double x);

/// hat1/hat2 studentize with sqrt(F_n(1 - F_n)), hathat1/hathat2 with
/// sqrt(F_mn(1 - F_mn)). Kind 1 centers at F_n through sum d_i 1(X_i <= x);
/// kind 2 is sum |d_i| (1(X_i <= x) - F(x)) and needs the true F(x).
enum class EdfPivotKind { Hat1, Hat2, HatHat1, HatHat2 };

std::string_view to_string(EdfPivotKind k) noexcept;
EdfPivotKind parse_edf_pivot_kind(std::string_view text);

/// Throws MissingF for hat2/hathat2 without F_x, ZeroScale when the relevant
/// F (1 - F) is zero, DegenerateWeights for equal weights.
double edf_pivot(EdfPivotKind kind, std::span<const double> data, const WeightVector& w, double x,
                 std::optional<double> F_x = std::nullopt);

/// Interval for F_n(x), and equally for F(x) up to the DKW slack:
///   center F_mn(x), half_width z sqrt(F_mn (1 - F_mn)) sqrt(sum d_i^2).
/// Endpoints are clamped to [0, 1]; meta keeps the raw ones.
/// Throws ZeroScale for f_mn in {0, 1}, DegenerateWeights when sum d_i^2 = 0.
ConfidenceInterval ci_edf(double f_mn, const WeightStats& ws, double alpha,
                          Sidedness sided = Sidedness::TwoSided);
ConfidenceInterval ci_edf(std::span<const double> data, const WeightVector& w, double x, double alpha,
                          Sidedness sided = Sidedness::TwoSided);

/// Interval for F(x) around f_hat with half width
/// z sqrt(F_mn (1 - F_mn)) sqrt(sum d_i^2) / sum |d_i|, clamped to [0, 1].
ConfidenceInterval ci_df(std::span<const double> data, const WeightVector& w, double x, double alpha,
                         Sidedness sided = Sidedness::TwoSided);

/// Dvoretzky–Kiefer–Wolfowitz: P(sup |F_n - F| > eps) <= min(1, 2 exp(-2 n eps^2)).
double dkw_bound(std::uint64_t n, double eps);

}  // namespace randpivot

#endif  // RANDPIVOT_EDF_HPP
