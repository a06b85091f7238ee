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

#include "randpivot/bounds.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "randpivot/error.hpp"
#include "randpivot/summation.hpp"

namespace randpivot {

double normal_continuity_modulus(double eps) {
  // 2 Phi(eps/2) - 1 = erf(eps / (2 sqrt 2))
  return std::erf(eps / (2.0 * std::sqrt(2.0)));
}

double delta_n(const BoundInputs& b) {
  if (!(b.delta > 0.0 && b.delta < 1.0)) throw Error(ErrorCode::BadParams, "delta must lie in (0,1)");
  if (!(b.eps > 0.0 && b.eps1 > 0.0 && b.eps2 > 0.0)) {
    throw Error(ErrorCode::BadParams, "eps, eps1, eps2 must be positive");
  }
  if (!(b.rho3 > 0.0 && b.c_be > 0.0)) throw Error(ErrorCode::BadParams, "rho3 and C must be positive");
  if (!(b.p_s2_dev >= 0.0 && b.p_s2_dev <= 1.0)) {
    throw Error(ErrorCode::BadParams, "P(|S_n^2 - sigma^2| > eps1^2) must lie in [0,1]");
  }
  const double ratio = b.eps1 / b.eps;
  const double slack = b.delta - ratio * ratio - b.p_s2_dev - b.eps2;
  if (!(slack > 0.0)) {
    throw Error(ErrorCode::HypothesisViolated, "delta <= (eps1/eps)^2 + p + eps2");
  }
  const double numerator = b.sign == DeltaSign::Corrected
                               ? slack
                               : b.delta - ratio * ratio - b.p_s2_dev + b.eps2;
  return numerator / (b.c_be * b.rho3);
}

double sixth_moment_expression(std::uint64_t n, std::uint64_t m) {
  const double r = static_cast<double>(m) / static_cast<double>(n);
  return 15.0 * r * r * r + 25.0 * r * r + r;
}

double chebyshev_brace(std::uint64_t n, std::uint64_t m) {
  const long double N = static_cast<long double>(n);
  const long double M = static_cast<long double>(m);
  const long double q = 1.0L - 1.0L / N;
  const long double N2 = N * N, N3 = N2 * N;
  const long double M2 = M * M, M3 = M2 * M;

  CompensatedSum<long double> s;
  s += q / (N3 * M3);
  s += (q * q * q * q) / M3;
  s += ((M - 1.0L) * q * q) / (N * M3);
  s += (4.0L * (N - 1.0L)) / (N3 * M);
  s += 1.0L / M2;
  s += -1.0L / (N * M2);
  s += (N - 1.0L) / (N3 * M3);
  s += (4.0L * (N - 1.0L)) / (N2 * M3);
  s += -(q * q) / M2;
  return static_cast<double>(s.value());
}

BoundValue theorem1_bound(const BoundInputs& b, BoundPart part) {
  return theorem1_bound(b, part, b.delta);
}

BoundValue theorem1_bound(const BoundInputs& b, BoundPart part, double threshold) {
  if (b.n < 2 || b.m < 1) throw Error(ErrorCode::BadParams, "bound needs n >= 2 and m >= 1");
  if (!(b.eps < 1.0)) throw Error(ErrorCode::EpsOutOfRange, "the (1 - eps)^-3 factor needs eps < 1");
  const double dn = delta_n(b);
  if (!(dn > 0.0)) throw Error(ErrorCode::HypothesisViolated, "delta_n must be positive");
  if (!(b.eps2 > normal_continuity_modulus(b.eps))) {
    throw Error(ErrorCode::ContinuityViolated,
                "eps2 must exceed 2 Phi(eps/2) - 1 = " + std::to_string(normal_continuity_modulus(b.eps)));
  }

  const long double N = static_cast<long double>(b.n);
  const long double M = static_cast<long double>(b.m);
  const long double q = 1.0L - 1.0L / N;
  const long double one_m_eps = 1.0L - static_cast<long double>(b.eps);

  const long double pi1 = 1.0L / (static_cast<long double>(dn) * dn) / (one_m_eps * one_m_eps * one_m_eps) /
                          (q * q * q) * ((N + N * N) / (M * M * M)) *
                          static_cast<long double>(sixth_moment_expression(b.n, b.m));
  const long double pi2 = 1.0L / (static_cast<long double>(b.eps) * b.eps) * (M * M / q) *
                          static_cast<long double>(chebyshev_brace(b.n, b.m));

  BoundValue v;
  v.delta_n = dn;
  v.pi1 = static_cast<double>(pi1);
  v.pi2 = static_cast<double>(pi2);
  v.raw = static_cast<double>(pi1 + pi2);
  v.capped = std::min(1.0, v.raw);
  v.part = part;
  v.threshold = threshold;
  return v;
}

double chebyshev_p_s2(std::uint64_t n, double eps1, double sigma2, double mu4) {
  if (n == 0) throw Error(ErrorCode::BadParams, "n must be positive");
  if (!(eps1 > 0.0)) throw Error(ErrorCode::BadParams, "eps1 must be positive");
  if (mu4 < sigma2 * sigma2) throw Error(ErrorCode::BadMoments, "mu4 < sigma2^2 is impossible");
  const double var_s2 = (mu4 - sigma2 * sigma2) / static_cast<double>(n);
  const double e2 = eps1 * eps1;
  return std::min(1.0, var_s2 / (e2 * e2));
}

RateKind parse_rate_kind(std::string_view text) {
  if (text.size() == 1) {
    switch (std::toupper(static_cast<unsigned char>(text[0]))) {
      case 'A': return RateKind::A;
      case 'B': return RateKind::B;
      case 'C': return RateKind::C;
      case 'D': return RateKind::D;
      default: break;
    }
  }
  throw Error(ErrorCode::BadParams, "rate kind must be one of A, B, C, D");
}

std::string_view to_string(RateKind k) noexcept {
  switch (k) {
    case RateKind::A: return "A";
    case RateKind::B: return "B";
    case RateKind::C: return "C";
    case RateKind::D: return "D";
  }
  return "?";
}

double rate(std::uint64_t n, std::uint64_t m, RateKind kind) {
  if (n == 0 || m == 0) throw Error(ErrorCode::BadParams, "rate needs n, m >= 1");
  const double nd = static_cast<double>(n);
  const double md = static_cast<double>(m);
  double r = std::max(md / (nd * nd), 1.0 / md);
  if (kind == RateKind::C || kind == RateKind::D) r = std::max(r, nd / (md * md));
  return r;
}

}  // namespace randpivot
