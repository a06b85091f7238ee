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

#include "randpivot/mc.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "randpivot/error.hpp"
#include "randpivot/rng.hpp"
#include "randpivot/weights.hpp"

namespace randpivot {

namespace {

constexpr std::uint64_t kMaxAttempts = 10000;

/// Runs body(i) for i in [0, count) on up to `threads` workers. Results must
/// be written to per-index slots so the outcome is independent of scheduling.
template <typename Body>
void parallel_for(std::uint64_t count, unsigned threads, Body&& body) {
  const unsigned workers = static_cast<unsigned>(std::clamp<std::uint64_t>(threads == 0 ? 1 : threads, 1, count));
  if (workers <= 1) {
    for (std::uint64_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto work = [&] {
    for (;;) {
      const std::uint64_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= count) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
        next.store(count);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned t = 0; t < workers; ++t) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

class PivotDraw {
 public:
  PivotDraw(const DistributionSpec& d, std::uint64_t n, std::uint64_t m, StudyPivot p, ScaleConvention s)
      : dist_(d), n_(n), m_(m == 0 ? n : m), pivot_(p), scale_(s), mu_(true_mean(d)) {
    validate(d);
    if (n_ < 2) throw Error(ErrorCode::TooFewObservations, "studies need n >= 2");
  }

  /// Pivot value on the stream for `path`, redrawing degenerate cases.
  template <typename PathFn>
  double operator()(std::uint64_t seed, PathFn&& path, std::uint64_t& redraws) const {
    for (std::uint64_t attempt = 0; attempt < kMaxAttempts; ++attempt) {
      CounterRng rng(path(seed, attempt));
      if (auto v = once(rng)) return *v;
      ++redraws;
    }
    throw Error(ErrorCode::DegenerateWeights, "pivot undefined after repeated redraws");
  }

 private:
  std::optional<double> once(CounterRng& rng) const {
    const std::vector<double> x = gen_sample(dist_, n_, rng);
    try {
      if (pivot_ == StudyPivot::ClassicalT) return classical_t(x, mu_, scale_);
      const WeightVector w = draw_weights(n_, m_, rng);
      PivotKind k = PivotKind::G1;
      switch (pivot_) {
        case StudyPivot::T1: k = PivotKind::T1; break;
        case StudyPivot::T2: k = PivotKind::T2; break;
        case StudyPivot::G2: k = PivotKind::G2; break;
        default: break;
      }
      return pivot(k, x, w, needs_mu(k) ? std::optional<double>(mu_) : std::nullopt, {scale_});
    } catch (const Error& e) {
      if (e.code() == ErrorCode::DegenerateWeights || e.code() == ErrorCode::ZeroScale) return std::nullopt;
      throw;
    }
  }

  DistributionSpec dist_;
  std::uint64_t n_;
  std::uint64_t m_;
  StudyPivot pivot_;
  ScaleConvention scale_;
  double mu_;
};

bool covered(double v, double z, Sidedness sided) {
  switch (sided) {
    case Sidedness::TwoSided: return std::abs(v) <= z;
    case Sidedness::Upper: return v <= z;
    case Sidedness::Lower: return v >= -z;
  }
  return false;
}

double resolve_cutoff(const std::optional<double>& cutoff, double alpha, Sidedness sided) {
  if (cutoff) {
    if (!std::isfinite(*cutoff)) throw Error(ErrorCode::BadParams, "cutoff must be finite");
    return *cutoff;
  }
  return critical_value(alpha, sided);
}

}  // namespace

std::string_view to_string(StudyPivot p) noexcept {
  switch (p) {
    case StudyPivot::T1: return "t1";
    case StudyPivot::T2: return "t2";
    case StudyPivot::G1: return "g1";
    case StudyPivot::G2: return "g2";
    case StudyPivot::ClassicalT: return "classical-t";
  }
  return "?";
}

StudyPivot parse_study_pivot(std::string_view text) {
  std::string s(text);
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (s == "classical-t" || s == "t") return StudyPivot::ClassicalT;
  switch (parse_pivot_kind(s)) {
    case PivotKind::T1: return StudyPivot::T1;
    case PivotKind::T2: return StudyPivot::T2;
    case PivotKind::G1: return StudyPivot::G1;
    case PivotKind::G2: return StudyPivot::G2;
  }
  return StudyPivot::G1;
}

double student_t_cutoff(std::uint64_t n) {
  switch (n) {
    case 20: return 1.729;
    case 25: return 1.711;
    case 30: return 1.699;
    default: break;
  }
  throw Error(ErrorCode::BadParams, "tabulated t cutoffs exist for n = 20, 25, 30 only");
}

CoverageReport coverage_study(const CoverageConfig& cfg) {
  if (cfg.reps == 0) throw Error(ErrorCode::BadParams, "reps must be at least 1");
  const PivotDraw draw(cfg.dist, cfg.n, cfg.m, cfg.pivot, cfg.scale);
  const double z = resolve_cutoff(cfg.cutoff, cfg.alpha, cfg.sided);

  std::vector<std::uint8_t> hit(cfg.reps, 0);
  std::vector<std::uint64_t> redraws(cfg.reps, 0);
  parallel_for(cfg.reps, cfg.threads, [&](std::uint64_t r) {
    const double v = draw(
        cfg.seed, [r](std::uint64_t s, std::uint64_t a) { return derive_stream(s, {r, a}); }, redraws[r]);
    hit[r] = covered(v, z, cfg.sided) ? 1 : 0;
  });

  CoverageReport rep;
  rep.config = cfg;
  rep.config.m = cfg.m == 0 ? cfg.n : cfg.m;
  rep.critical = z;
  for (std::uint64_t r = 0; r < cfg.reps; ++r) {
    rep.hits += hit[r];
    rep.degenerate_count += redraws[r];
  }
  const double reps = static_cast<double>(cfg.reps);
  rep.coverage = static_cast<double>(rep.hits) / reps;
  rep.std_error = std::sqrt(rep.coverage * (1.0 - rep.coverage) / reps);
  return rep;
}

ProportionReport proportion_study(const ProportionConfig& cfg) {
  if (cfg.outer_reps == 0 || cfg.inner_reps == 0) throw Error(ErrorCode::BadParams, "outer and inner reps must be at least 1");
  if (!(cfg.band[0] <= cfg.band[1])) throw Error(ErrorCode::BadParams, "band must satisfy lo <= hi");
  const PivotDraw draw(cfg.dist, cfg.n, cfg.m, cfg.pivot, cfg.scale);
  const double z = resolve_cutoff(cfg.cutoff, cfg.alpha, cfg.sided);

  std::vector<std::uint64_t> hits(cfg.outer_reps, 0);
  std::vector<std::uint64_t> redraws(cfg.outer_reps, 0);
  parallel_for(cfg.outer_reps, cfg.threads, [&](std::uint64_t o) {
    std::uint64_t h = 0;
    for (std::uint64_t i = 0; i < cfg.inner_reps; ++i) {
      const double v = draw(
          cfg.seed, [o, i](std::uint64_t s, std::uint64_t a) { return derive_stream(s, {o, i, a}); },
          redraws[o]);
      h += covered(v, z, cfg.sided) ? 1 : 0;
    }
    hits[o] = h;
  });

  ProportionReport rep;
  rep.config = cfg;
  rep.config.m = cfg.m == 0 ? cfg.n : cfg.m;
  rep.critical = z;
  std::uint64_t total = 0;
  for (std::uint64_t o = 0; o < cfg.outer_reps; ++o) {
    const double c = static_cast<double>(hits[o]) / static_cast<double>(cfg.inner_reps);
    if (c >= cfg.band[0] && c <= cfg.band[1]) ++rep.in_band;
    total += hits[o];
    rep.degenerate_count += redraws[o];
  }
  rep.proportion = static_cast<double>(rep.in_band) / static_cast<double>(cfg.outer_reps);
  rep.mean_coverage =
      static_cast<double>(total) / (static_cast<double>(cfg.outer_reps) * static_cast<double>(cfg.inner_reps));
  return rep;
}

std::vector<double> pivot_draws(const KdistConfig& cfg, std::uint64_t* degenerate) {
  const PivotDraw draw(cfg.dist, cfg.n, cfg.m, cfg.pivot, cfg.scale);
  std::vector<double> vals(cfg.reps);
  std::vector<std::uint64_t> redraws(cfg.reps, 0);
  parallel_for(cfg.reps, cfg.threads, [&](std::uint64_t r) {
    const std::uint64_t id = cfg.first_rep + r;
    vals[r] = draw(
        cfg.seed, [id](std::uint64_t s, std::uint64_t a) { return derive_stream(s, {id, a}); }, redraws[r]);
  });
  if (degenerate) {
    *degenerate = 0;
    for (std::uint64_t c : redraws) *degenerate += c;
  }
  return vals;
}

KdistReport kolmogorov_distance(const KdistConfig& cfg) {
  if (cfg.reps < kKdistMinReps) throw Error(ErrorCode::BadParams, "kolmogorov distance needs at least 10^4 reps");
  KdistReport rep;
  rep.config = cfg;
  rep.config.m = cfg.m == 0 ? cfg.n : cfg.m;
  std::vector<double> vals = pivot_draws(cfg, &rep.degenerate_count);
  std::sort(vals.begin(), vals.end());
  const double reps = static_cast<double>(vals.size());
  for (std::size_t k = 0; k < kKdistGridPoints; ++k) {
    const double t = -4.0 + 8.0 * static_cast<double>(k) / static_cast<double>(kKdistGridPoints - 1);
    const auto below = std::upper_bound(vals.begin(), vals.end(), t) - vals.begin();
    const double d = std::abs(static_cast<double>(below) / reps - normal_cdf(t));
    if (d > rep.distance) {
      rep.distance = d;
      rep.argmax = t;
    }
  }
  return rep;
}

Preset preset(std::string_view name) {
  using D = DistributionSpec;
  Preset p;
  p.name = std::string(name);
  if (name == "table1") {
    const struct {
      D dist;
      std::uint64_t n;
      double g1, t;
    } rows[] = {
        {D::binomial(10, 0.1), 20, 0.956, 0.964}, {D::binomial(10, 0.1), 30, 0.953, 0.960},
        {D::exponential(1), 20, 0.959, 0.975},    {D::exponential(1), 30, 0.956, 0.968},
        {D::normal(0, 1), 20, 0.945, 0.931},      {D::normal(0, 1), 30, 0.951, 0.946},
        {D::beta(5, 1), 20, 0.914, 0.903},        {D::beta(5, 1), 30, 0.949, 0.909},
        {D::binomial(10, 0.9), 20, 0.922, 0.904}, {D::binomial(10, 0.9), 30, 0.956, 0.936},
    };
    for (const auto& r : rows) {
      p.cells.push_back({r.dist, r.n, StudyPivot::G1, std::nullopt, r.g1});
      p.cells.push_back({r.dist, r.n, StudyPivot::ClassicalT, std::nullopt, r.t});
    }
    return p;
  }
  if (name == "table2") {
    p.proportion = true;
    const struct {
      std::uint64_t n;
      double g1, t;
    } rows[] = {{20, 0.55, 0.626}, {25, 0.622, 0.662}, {30, 0.628, 0.632}};
    for (const auto& r : rows) {
      p.cells.push_back({D::normal(0, 1), r.n, StudyPivot::G1, std::nullopt, r.g1});
      p.cells.push_back({D::normal(0, 1), r.n, StudyPivot::ClassicalT, student_t_cutoff(r.n), r.t});
    }
    return p;
  }
  if (name == "table3" || name == "table3-std") {
    p.proportion = true;
    const bool std_lognormal = name == "table3-std";
    const struct {
      D dist;
      double g1[3], t[3];
    } rows[] = {
        {D::binomial(10, 0.1), {0.745, 0.764, 0.768}, {0.486, 0.546, 0.511}},
        {D::poisson(1), {0.552, 0.554, 0.560}, {0.322, 0.376, 0.364}},
        {D::lognormal(0, 1, std_lognormal), {0.142, 0.168, 0.196}, {0.000, 0.000, 0.000}},
        {D::exponential(1), {0.308, 0.338, 0.432}, {0.016, 0.020, 0.044}},
        {D::normal(0, 1), {0.566, 0.600, 0.634}, {0.486, 0.568, 0.612}},
        {D::beta(5, 1), {0.074, 0.136, 0.234}, {0.000, 0.016, 0.058}},
    };
    const std::uint64_t ns[3] = {20, 30, 40};
    for (const auto& r : rows) {
      for (int k = 0; k < 3; ++k) {
        p.cells.push_back({r.dist, ns[k], StudyPivot::G1, std::nullopt, r.g1[k]});
        p.cells.push_back({r.dist, ns[k], StudyPivot::ClassicalT, std::nullopt, r.t[k]});
      }
    }
    return p;
  }
  throw Error(ErrorCode::BadParams, "unknown preset '" + std::string(name) + "'");
}

std::vector<std::string> preset_names() { return {"table1", "table2", "table3", "table3-std"}; }

}  // namespace randpivot
