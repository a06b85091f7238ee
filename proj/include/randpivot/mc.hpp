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

#ifndef RANDPIVOT_MC_HPP
#define RANDPIVOT_MC_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "randpivot/distributions.hpp"
#include "randpivot/intervals.hpp"
#include "randpivot/pivots.hpp"

namespace randpivot {

/// Pivots a study can evaluate: the four randomized ones plus the classical
/// Student statistic (mean - mu) / (S / sqrt(n)).
enum class StudyPivot { T1, T2, G1, G2, ClassicalT };

std::string_view to_string(StudyPivot p) noexcept;
/// "t1", "t2", "g1", "g2", "classical-t" (or "t").
StudyPivot parse_study_pivot(std::string_view text);

/// One-sided Student cutoffs t_{0.05, n-1} for n in {20, 25, 30}. Throws
/// BadParams for any other n.
double student_t_cutoff(std::uint64_t n);

/// Covered means: TwoSided |P| <= z, Upper P <= z, Lower P >= -z, where P is
/// the pivot evaluated at the true target. For G-kinds and the classical
/// statistic the target is the population mean, for T-kinds the sample mean.
/// This is the same event as "the interval contains the target".
struct CoverageConfig {
  DistributionSpec dist;
  std::uint64_t n = 20;
  std::uint64_t m = 0;  ///< 0 means m = n
  StudyPivot pivot = StudyPivot::G1;
  std::uint64_t reps = 1000;
  double alpha = 0.05;
  Sidedness sided = Sidedness::Upper;
  std::optional<double> cutoff;  ///< overrides the normal quantile
  ScaleConvention scale = ScaleConvention::Population;
  std::uint64_t seed = 1;
  unsigned threads = 1;
};

struct CoverageReport {
  CoverageConfig config;
  double critical = 0.0;
  std::uint64_t hits = 0;
  double coverage = 0.0;
  double std_error = 0.0;  ///< sqrt(p (1 - p) / reps)
  std::uint64_t degenerate_count = 0;
};

/// Replication r draws its data, then its weights, from the stream
/// derive_stream(seed, {r, attempt}). A replication whose pivot is undefined
/// (equal weights or zero scale) is redrawn with attempt + 1 and counted,
/// so every study uses exactly reps replications. The result does not depend
/// on the thread count.
CoverageReport coverage_study(const CoverageConfig& cfg);

struct ProportionConfig {
  DistributionSpec dist;
  std::uint64_t n = 20;
  std::uint64_t m = 0;
  StudyPivot pivot = StudyPivot::G1;
  std::uint64_t outer_reps = 500;
  std::uint64_t inner_reps = 500;
  std::array<double, 2> band = {0.94, 0.96};
  double alpha = 0.05;
  Sidedness sided = Sidedness::Upper;
  std::optional<double> cutoff;
  ScaleConvention scale = ScaleConvention::Population;
  std::uint64_t seed = 1;
  unsigned threads = 1;
};

struct ProportionReport {
  ProportionConfig config;
  double critical = 0.0;
  std::uint64_t in_band = 0;
  double proportion = 0.0;
  double mean_coverage = 0.0;
  std::uint64_t degenerate_count = 0;
};

/// Each outer replication o estimates a coverage from inner_reps replications
/// on streams derive_stream(seed, {o, i, attempt}); proportion is the share
/// of those estimates inside the closed band.
ProportionReport proportion_study(const ProportionConfig& cfg);

struct KdistConfig {
  DistributionSpec dist;
  std::uint64_t n = 100;
  std::uint64_t m = 0;
  StudyPivot pivot = StudyPivot::G1;
  std::uint64_t reps = 100000;
  ScaleConvention scale = ScaleConvention::Population;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  std::uint64_t first_rep = 0;  ///< offset into the replication streams
};

struct KdistReport {
  KdistConfig config;
  double distance = 0.0;
  double argmax = 0.0;
  std::uint64_t degenerate_count = 0;
};

inline constexpr std::size_t kKdistGridPoints = 512;
inline constexpr std::uint64_t kKdistMinReps = 10000;

/// max over 512 equally spaced t in [-4, 4] of |empirical CDF of the pivot
/// at t - Phi(t)|. Requires reps >= 10^4.
KdistReport kolmogorov_distance(const KdistConfig& cfg);

/// Pivot values for replications first_rep .. first_rep + reps - 1, in
/// replication order. Exposed for tests.
std::vector<double> pivot_draws(const KdistConfig& cfg, std::uint64_t* degenerate = nullptr);

// ---------------------------------------------------------------------------
// Study presets
// ---------------------------------------------------------------------------

struct PresetCell {
  DistributionSpec dist;
  std::uint64_t n = 0;
  StudyPivot pivot = StudyPivot::G1;
  std::optional<double> cutoff;  ///< empty: normal quantile
  double reference = 0.0;        ///< reference value for this cell
};

struct Preset {
  std::string name;
  bool proportion = false;  ///< proportion study rather than plain coverage
  Sidedness sided = Sidedness::Upper;
  ScaleConvention scale = ScaleConvention::Unbiased;
  double alpha = 0.05;
  std::uint64_t reps = 1000;        ///< coverage presets
  std::uint64_t outer_reps = 500;   ///< proportion presets
  std::uint64_t inner_reps = 500;
  std::vector<PresetCell> cells;
};

/// "table1", "table2", "table3" or "table3-std" (standardized lognormal).
Preset preset(std::string_view name);
std::vector<std::string> preset_names();

}  // namespace randpivot

#endif  // RANDPIVOT_MC_HPP
