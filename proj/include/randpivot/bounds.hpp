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

#ifndef RANDPIVOT_BOUNDS_HPP
#define RANDPIVOT_BOUNDS_HPP

#include <cstdint>
#include <string_view>

namespace randpivot {

/// Sign applied to eps2 in the numerator of delta_n.
///
/// Corrected subtracts eps2, which is what the derivation of the bound
/// supports and what keeps delta_n consistent with the hypothesis
/// delta > (eps1/eps)^2 + p + eps2. Strict adds eps2 instead.
enum class DeltaSign { Corrected, Strict };

/// Which conditional statement the bound is reported for: (A) is about the
/// G-pivot, (B) about the T-pivot. The bound expression is the same; only
/// the reported threshold label differs.
enum class BoundPart { A, B };

struct BoundInputs {
  std::uint64_t n = 0;
  std::uint64_t m = 0;
  double delta = 0.0;
  double eps = 0.0;
  double eps1 = 0.0;
  double eps2 = 0.0;
  double rho3 = 0.0;      ///< E|X - mu|^3 / sigma^{3/2}
  double p_s2_dev = 0.0;  ///< P(|S_n^2 - sigma^2| > eps1^2)
  double c_be = 0.5600;   ///< Berry–Esseen constant for non-i.i.d. summands
  DeltaSign sign = DeltaSign::Corrected;
};

/// Smallest eps2 for which Phi(t + eps) - Phi(t) < eps2 holds for every t,
/// namely sup_t [Phi(t + eps) - Phi(t)] = 2 Phi(eps/2) - 1.
double normal_continuity_modulus(double eps);

/// (delta - (eps1/eps)^2 - p -/+ eps2) / (C rho3).
/// Throws BadParams for out-of-range inputs and HypothesisViolated when the
/// hypothesis delta > (eps1/eps)^2 + p + eps2 fails or the numerator is not
/// positive.
double delta_n(const BoundInputs& b);

struct BoundValue {
  double delta_n = 0.0;
  double pi1 = 0.0;    ///< sixth-moment Markov term
  double pi2 = 0.0;    ///< Chebyshev term for the normalizing sum
  double raw = 0.0;    ///< pi1 + pi2, may exceed 1
  double capped = 0.0; ///< min(1, raw)
  BoundPart part = BoundPart::A;
  double threshold = 0.0;  ///< the deviation level the probability refers to
};

/// Explicit Berry–Esseen-type bound on
///   P_w{ sup_t |P_{X|w}(pivot <= t) - Phi(t)| > threshold }.
/// Requires n >= 2, eps < 1 (EpsOutOfRange) and eps2 above the continuity
/// modulus of eps (ContinuityViolated). threshold defaults to delta for
/// both parts.
BoundValue theorem1_bound(const BoundInputs& b, BoundPart part = BoundPart::A);
BoundValue theorem1_bound(const BoundInputs& b, BoundPart part, double threshold);

/// The nine-term brace of the Chebyshev part, transcribed term by term and
/// accumulated in extended precision.
double chebyshev_brace(std::uint64_t n, std::uint64_t m);

/// 15 m^3/n^3 + 25 m^2/n^2 + m/n, the expression used for E(w_1 - m/n)^6.
double sixth_moment_expression(std::uint64_t n, std::uint64_t m);

/// min(1, ((mu4 - sigma2^2)/n) / eps1^4). Throws BadMoments if mu4 < sigma2^2.
double chebyshev_p_s2(std::uint64_t n, double eps1, double sigma2, double mu4);

enum class RateKind { A, B, C, D };

RateKind parse_rate_kind(std::string_view text);
std::string_view to_string(RateKind k) noexcept;

/// max(m/n^2, 1/m) for A and B; max(m/n^2, 1/m, n/m^2) for C and D.
double rate(std::uint64_t n, std::uint64_t m, RateKind kind);

}  // namespace randpivot

#endif  // RANDPIVOT_BOUNDS_HPP
