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

#ifndef RANDPIVOT_DISTRIBUTIONS_HPP
#define RANDPIVOT_DISTRIBUTIONS_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "randpivot/rng.hpp"

namespace randpivot {

enum class Family { Binomial, Poisson, Lognormal, Exponential, Normal, Beta, Uniform };

/// Parameters by family:
///   Binomial(k, p), Poisson(lambda), Lognormal(log-mean, log-sd),
///   Exponential(rate), Normal(mean, sd), Beta(a, b), Uniform(lo, hi).
/// A standardized lognormal is shifted and scaled to mean 0, variance 1.
struct DistributionSpec {
  Family family = Family::Normal;
  double a = 0.0;
  double b = 1.0;
  bool standardized = false;

  static DistributionSpec binomial(double k, double p) { return {Family::Binomial, k, p}; }
  static DistributionSpec poisson(double lambda) { return {Family::Poisson, lambda, 0.0}; }
  static DistributionSpec lognormal(double mu, double sigma, bool standardized = false) {
    return {Family::Lognormal, mu, sigma, standardized};
  }
  static DistributionSpec exponential(double rate) { return {Family::Exponential, rate, 0.0}; }
  static DistributionSpec normal(double mu, double sigma) { return {Family::Normal, mu, sigma}; }
  static DistributionSpec beta(double a, double b) { return {Family::Beta, a, b}; }
  static DistributionSpec uniform(double lo, double hi) { return {Family::Uniform, lo, hi}; }
};

/// "normal:0,1", "binomial:10,0.1", "poisson:1", "lognormal:0,1",
/// "lognormal-std:0,1", "exponential:1", "beta:5,1", "uniform:0,1".
/// Validates parameters; throws BadParams.
DistributionSpec parse_distribution(std::string_view text);
std::string to_string(const DistributionSpec& d);
/// Human-readable label such as "Binomial(10,0.1)".
std::string label(const DistributionSpec& d);

/// Throws BadParams for invalid parameters.
void validate(const DistributionSpec& d);

double true_mean(const DistributionSpec& d);
double true_variance(const DistributionSpec& d);

/// Variate generator for one family. Algorithms: inverse CDF for Uniform and
/// Exponential; Box–Muller pairs for Normal; exp of a normal for Lognormal;
/// k Bernoulli trials for Binomial; sequential search (lambda < 30) or
/// Hörmann's PTRS for Poisson; Marsaglia–Tsang gammas for Beta.
class Sampler {
 public:
  explicit Sampler(const DistributionSpec& d);
  double operator()(CounterRng& rng);

 private:
  double normal(CounterRng& rng);
  double gamma(double shape, CounterRng& rng);
  double poisson(CounterRng& rng);

  DistributionSpec d_;
  double cached_normal_ = 0.0;
  bool have_cached_ = false;
  double shift_ = 0.0;
  double scale_ = 1.0;
};

/// n i.i.d. draws.
std::vector<double> gen_sample(const DistributionSpec& d, std::size_t n, CounterRng& rng);

}  // namespace randpivot

#endif  // RANDPIVOT_DISTRIBUTIONS_HPP
