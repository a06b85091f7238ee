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

#include "randpivot/distributions.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "randpivot/error.hpp"

namespace randpivot {

namespace {

std::vector<double> parse_params(std::string_view s) {
  std::vector<double> out;
  std::string tok;
  std::istringstream in{std::string(s)};
  while (std::getline(in, tok, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != tok.size()) throw Error(ErrorCode::BadParams, "bad distribution parameter '" + tok + "'");
    out.push_back(v);
  }
  return out;
}

std::string num(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

void validate(const DistributionSpec& d) {
  const auto bad = [](const char* msg) { throw Error(ErrorCode::BadParams, msg); };
  switch (d.family) {
    case Family::Binomial:
      if (!(d.a >= 1.0 && d.a == std::floor(d.a) && d.a <= 1e6)) bad("binomial size must be a positive integer");
      if (!(d.b >= 0.0 && d.b <= 1.0)) bad("binomial p must lie in [0,1]");
      break;
    case Family::Poisson:
      if (!(d.a > 0.0 && d.a < 1e9)) bad("poisson lambda must be positive");
      break;
    case Family::Lognormal:
      if (!std::isfinite(d.a) || !(d.b > 0.0 && std::isfinite(d.b))) bad("lognormal needs finite mu and sigma > 0");
      break;
    case Family::Exponential:
      if (!(d.a > 0.0 && std::isfinite(d.a))) bad("exponential rate must be positive");
      break;
    case Family::Normal:
      if (!std::isfinite(d.a) || !(d.b > 0.0 && std::isfinite(d.b))) bad("normal needs finite mean and sd > 0");
      break;
    case Family::Beta:
      if (!(d.a > 0.0 && d.b > 0.0 && std::isfinite(d.a) && std::isfinite(d.b))) bad("beta shapes must be positive");
      break;
    case Family::Uniform:
      if (!(std::isfinite(d.a) && std::isfinite(d.b) && d.a < d.b)) bad("uniform needs lo < hi");
      break;
  }
}

DistributionSpec parse_distribution(std::string_view text) {
  const std::size_t colon = text.find(':');
  const std::string name(text.substr(0, colon));
  const std::vector<double> p =
      colon == std::string_view::npos ? std::vector<double>{} : parse_params(text.substr(colon + 1));
  const auto want = [&](std::size_t k) {
    if (p.size() != k) {
      throw Error(ErrorCode::BadParams, name + " takes " + std::to_string(k) + " parameter(s)");
    }
  };
  DistributionSpec d;
  if (name == "binomial") {
    want(2);
    d = DistributionSpec::binomial(p[0], p[1]);
  } else if (name == "poisson") {
    want(1);
    d = DistributionSpec::poisson(p[0]);
  } else if (name == "lognormal" || name == "lognormal-std") {
    want(2);
    d = DistributionSpec::lognormal(p[0], p[1], name == "lognormal-std");
  } else if (name == "exponential") {
    want(1);
    d = DistributionSpec::exponential(p[0]);
  } else if (name == "normal") {
    want(2);
    d = DistributionSpec::normal(p[0], p[1]);
  } else if (name == "beta") {
    want(2);
    d = DistributionSpec::beta(p[0], p[1]);
  } else if (name == "uniform") {
    want(2);
    d = DistributionSpec::uniform(p[0], p[1]);
  } else {
    throw Error(ErrorCode::BadParams, "unknown distribution '" + name + "'");
  }
  validate(d);
  return d;
}

std::string to_string(const DistributionSpec& d) {
  switch (d.family) {
    case Family::Binomial: return "binomial:" + num(d.a) + "," + num(d.b);
    case Family::Poisson: return "poisson:" + num(d.a);
    case Family::Lognormal: return (d.standardized ? "lognormal-std:" : "lognormal:") + num(d.a) + "," + num(d.b);
    case Family::Exponential: return "exponential:" + num(d.a);
    case Family::Normal: return "normal:" + num(d.a) + "," + num(d.b);
    case Family::Beta: return "beta:" + num(d.a) + "," + num(d.b);
    case Family::Uniform: return "uniform:" + num(d.a) + "," + num(d.b);
  }
  return "?";
}

std::string label(const DistributionSpec& d) {
  switch (d.family) {
    case Family::Binomial: return "Binomial(" + num(d.a) + "," + num(d.b) + ")";
    case Family::Poisson: return "Poisson(" + num(d.a) + ")";
    case Family::Lognormal:
      return std::string(d.standardized ? "StdLognormal(" : "Lognormal(") + num(d.a) + "," + num(d.b) + ")";
    case Family::Exponential: return "Exponential(" + num(d.a) + ")";
    case Family::Normal: return "Normal(" + num(d.a) + "," + num(d.b) + ")";
    case Family::Beta: return "Beta(" + num(d.a) + "," + num(d.b) + ")";
    case Family::Uniform: return "Uniform(" + num(d.a) + "," + num(d.b) + ")";
  }
  return "?";
}

double true_mean(const DistributionSpec& d) {
  switch (d.family) {
    case Family::Binomial: return d.a * d.b;
    case Family::Poisson: return d.a;
    case Family::Lognormal: return d.standardized ? 0.0 : std::exp(d.a + 0.5 * d.b * d.b);
    case Family::Exponential: return 1.0 / d.a;
    case Family::Normal: return d.a;
    case Family::Beta: return d.a / (d.a + d.b);
    case Family::Uniform: return 0.5 * (d.a + d.b);
  }
  return 0.0;
}

double true_variance(const DistributionSpec& d) {
  switch (d.family) {
    case Family::Binomial: return d.a * d.b * (1.0 - d.b);
    case Family::Poisson: return d.a;
    case Family::Lognormal:
      return d.standardized ? 1.0 : std::expm1(d.b * d.b) * std::exp(2.0 * d.a + d.b * d.b);
    case Family::Exponential: return 1.0 / (d.a * d.a);
    case Family::Normal: return d.b * d.b;
    case Family::Beta: {
      const double s = d.a + d.b;
      return d.a * d.b / (s * s * (s + 1.0));
    }
    case Family::Uniform: return (d.b - d.a) * (d.b - d.a) / 12.0;
  }
  return 0.0;
}

Sampler::Sampler(const DistributionSpec& d) : d_(d) {
  validate(d);
  if (d.family == Family::Lognormal && d.standardized) {
    const DistributionSpec raw = DistributionSpec::lognormal(d.a, d.b);
    shift_ = true_mean(raw);
    scale_ = std::sqrt(true_variance(raw));
  }
}

double Sampler::normal(CounterRng& rng) {
  if (have_cached_) {
    have_cached_ = false;
    return cached_normal_;
  }
  const double r = std::sqrt(-2.0 * std::log(rng.uniform_pos()));
  const double theta = 2.0 * std::numbers::pi * rng.uniform();
  cached_normal_ = r * std::sin(theta);
  have_cached_ = true;
  return r * std::cos(theta);
}

double Sampler::gamma(double shape, CounterRng& rng) {
  if (shape < 1.0) {
    const double g = gamma(shape + 1.0, rng);
    return g * std::pow(rng.uniform_pos(), 1.0 / shape);
  }
  const double dd = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * dd);
  for (;;) {
    double x = 0.0;
    double v = 0.0;
    do {
      x = normal(rng);
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform_pos();
    if (u < 1.0 - 0.0331 * x * x * x * x) return dd * v;
    if (std::log(u) < 0.5 * x * x + dd * (1.0 - v + std::log(v))) return dd * v;
  }
}

double Sampler::poisson(CounterRng& rng) {
  const double lam = d_.a;
  if (lam < 30.0) {
    const double u = rng.uniform();
    double p = std::exp(-lam);
    double cdf = p;
    double k = 0.0;
    while (u > cdf && p > 0.0) {
      k += 1.0;
      p *= lam / k;
      cdf += p;
    }
    return k;
  }
  // PTRS, transformed rejection with squeeze.
  const double slam = std::sqrt(lam);
  const double loglam = std::log(lam);
  const double b = 0.931 + 2.53 * slam;
  const double a = -0.059 + 0.02483 * b;
  const double invalpha = 1.1239 + 1.1328 / (b - 3.4);
  const double vr = 0.9277 - 3.6224 / (b - 2.0);
  for (;;) {
    const double u = rng.uniform() - 0.5;
    const double v = rng.uniform();
    const double us = 0.5 - std::abs(u);
    const double k = std::floor((2.0 * a / us + b) * u + lam + 0.43);
    if (us >= 0.07 && v <= vr) return k;
    if (k < 0.0 || (us < 0.013 && v > us)) continue;
    if (std::log(v) + std::log(invalpha) - std::log(a / (us * us) + b) <=
        -lam + k * loglam - std::lgamma(k + 1.0)) {
      return k;
    }
  }
}

double Sampler::operator()(CounterRng& rng) {
  switch (d_.family) {
    case Family::Binomial: {
      const auto k = static_cast<std::uint64_t>(d_.a);
      std::uint64_t hits = 0;
      for (std::uint64_t i = 0; i < k; ++i) hits += rng.uniform() < d_.b ? 1 : 0;
      return static_cast<double>(hits);
    }
    case Family::Poisson: return poisson(rng);
    case Family::Lognormal: return (std::exp(d_.a + d_.b * normal(rng)) - shift_) / scale_;
    case Family::Exponential: return -std::log1p(-rng.uniform()) / d_.a;
    case Family::Normal: return d_.a + d_.b * normal(rng);
    case Family::Beta: {
      const double x = gamma(d_.a, rng);
      const double y = gamma(d_.b, rng);
      return x / (x + y);
    }
    case Family::Uniform: return d_.a + (d_.b - d_.a) * rng.uniform();
  }
  return 0.0;
}

std::vector<double> gen_sample(const DistributionSpec& d, std::size_t n, CounterRng& rng) {
  Sampler s(d);
  std::vector<double> out(n);
  for (double& v : out) v = s(rng);
  return out;
}

}  // namespace randpivot
