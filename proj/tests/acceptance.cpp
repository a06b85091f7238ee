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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
// The root seed is fixed at 1 before any run; nothing here is tuned to it.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "randpivot/bigdata.hpp"
#include "randpivot/bounds.hpp"
#include "randpivot/cli.hpp"
#include "randpivot/distributions.hpp"
#include "randpivot/edf.hpp"
#include "randpivot/error.hpp"
#include "randpivot/intervals.hpp"
#include "randpivot/mc.hpp"
#include "randpivot/pivots.hpp"
#include "randpivot/weights.hpp"

using namespace randpivot;
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kSeed = 1;

unsigned worker_threads() { return std::max(1u, std::thread::hardware_concurrency()); }

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

struct Outcome {
  bool pass = true;
  std::vector<std::string> details;

  void check(bool ok, const std::string& what) {
    details.push_back(std::string(ok ? "  ok    " : "  MISS  ") + what);
    pass = pass && ok;
  }
  void info(const std::string& what) { details.push_back("        " + what); }
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

CoverageConfig coverage_cell(const Preset& p, const PresetCell& c, unsigned threads) {
  CoverageConfig cfg;
  cfg.dist = c.dist;
  cfg.n = c.n;
  cfg.pivot = c.pivot;
  cfg.cutoff = c.cutoff;
  cfg.reps = p.reps;
  cfg.alpha = p.alpha;
  cfg.sided = p.sided;
  cfg.scale = p.scale;
  cfg.seed = kSeed;
  cfg.threads = threads;
  return cfg;
}

ProportionConfig proportion_cell(const Preset& p, const PresetCell& c, unsigned threads) {
  ProportionConfig cfg;
  cfg.dist = c.dist;
  cfg.n = c.n;
  cfg.pivot = c.pivot;
  cfg.cutoff = c.cutoff;
  cfg.outer_reps = p.outer_reps;
  cfg.inner_reps = p.inner_reps;
  cfg.alpha = p.alpha;
  cfg.sided = p.sided;
  cfg.scale = p.scale;
  cfg.seed = kSeed;
  cfg.threads = threads;
  return cfg;
}

const PresetCell& find_cell(const Preset& p, Family f, std::uint64_t n, StudyPivot piv, double a = NAN) {
  for (const auto& c : p.cells)
    if (c.dist.family == f && c.n == n && c.pivot == piv && (std::isnan(a) || c.dist.a == a)) return c;
  throw Error(ErrorCode::BadParams, "preset cell not found");
}

// 1. reference coverage cells for G1
Outcome criterion1() {
  Outcome o;
  const Preset p = preset("table1");
  const struct {
    Family f;
    double a;
    std::uint64_t n;
  } cells[] = {{Family::Normal, 0, 20}, {Family::Binomial, 10, 20}, {Family::Exponential, 1, 20}, {Family::Beta, 5, 30}};
  for (const auto& k : cells) {
    const PresetCell& c = find_cell(p, k.f, k.n, StudyPivot::G1, k.a);
    Stopwatch sw;
    const auto r = coverage_study(coverage_cell(p, c, 1));
    const double t = sw.seconds();
    o.check(std::abs(r.coverage - c.reference) <= 0.025,
            fmt("%-18s n=%-3llu coverage %.3f vs %.3f (|diff| <= 0.025), %llu redraws", label(c.dist).c_str(),
                (unsigned long long)c.n, r.coverage, c.reference, (unsigned long long)r.degenerate_count));
    o.check(t < 10.0, fmt("%-18s n=%-3llu single-threaded runtime %.2f s < 10 s", label(c.dist).c_str(),
                          (unsigned long long)c.n, t));
  }
  return o;
}

// 2. G1 closer to nominal than classical T with the normal cutoff
Outcome criterion2() {
  Outcome o;
  const Preset p = preset("table1");
  for (Family f : {Family::Exponential, Family::Beta}) {
    for (std::uint64_t n : {20ull, 30ull}) {
      const PresetCell& g = find_cell(p, f, n, StudyPivot::G1);
      const PresetCell& t = find_cell(p, f, n, StudyPivot::ClassicalT);
      const double cg = coverage_study(coverage_cell(p, g, worker_threads())).coverage;
      const double ct = coverage_study(coverage_cell(p, t, worker_threads())).coverage;
      o.check(std::abs(cg - 0.95) < std::abs(ct - 0.95),
              fmt("%-18s n=%-3llu G1 %.3f vs T %.3f (distance to 0.95: %.3f vs %.3f)", label(g.dist).c_str(),
                  (unsigned long long)n, cg, ct, std::abs(cg - 0.95), std::abs(ct - 0.95)));
    }
  }
  return o;
}

// 3. proportion of coverage estimates inside [0.94, 0.96]: dominance and proximity
Outcome criterion3() {
  Outcome o;
  const Preset p = preset("table3");
  Stopwatch sw;
  for (Family f : {Family::Binomial, Family::Poisson, Family::Lognormal, Family::Exponential, Family::Beta}) {
    for (std::uint64_t n : {20ull, 30ull, 40ull}) {
      const PresetCell& g = find_cell(p, f, n, StudyPivot::G1);
      const PresetCell& t = find_cell(p, f, n, StudyPivot::ClassicalT);
      const auto rg = proportion_study(proportion_cell(p, g, worker_threads()));
      const auto rt = proportion_study(proportion_cell(p, t, worker_threads()));
      const std::string name = fmt("%-18s n=%-3llu", label(g.dist).c_str(), (unsigned long long)n);
      o.check(rg.proportion > rt.proportion,
              fmt("%s dominance: G1 %.3f > T %.3f", name.c_str(), rg.proportion, rt.proportion));
      o.check(std::abs(rg.proportion - g.reference) <= 0.1,
              fmt("%s G1 %.3f vs reference %.3f (|diff| <= 0.1)", name.c_str(), rg.proportion, g.reference));
      o.check(std::abs(rt.proportion - t.reference) <= 0.1,
              fmt("%s T  %.3f vs reference %.3f (|diff| <= 0.1)", name.c_str(), rt.proportion, t.reference));
    }
  }
  const double t = sw.seconds();
  o.check(t < 900.0, fmt("runtime %.1f s < 900 s on %u thread(s)", t, worker_threads()));
  return o;
}

// 4. Kolmogorov distance shrinks like 1/n
Outcome criterion4() {
  Outcome o;
  KdistConfig cfg;
  cfg.dist = DistributionSpec::normal(0, 1);
  cfg.pivot = StudyPivot::G1;
  cfg.reps = 100000;
  cfg.seed = kSeed;
  cfg.threads = worker_threads();
  cfg.n = 25;
  const auto d25 = kolmogorov_distance(cfg);
  cfg.n = 100;
  const auto d100 = kolmogorov_distance(cfg);
  const double ratio = d25.distance / d100.distance;
  o.check(ratio >= 2.0 && ratio <= 8.0, fmt("d(25) = %.5f at t=%.3f, d(100) = %.5f at t=%.3f, ratio %.3f in [2, 8]",
                                            d25.distance, d25.argmax, d100.distance, d100.argmax, ratio));
  return o;
}

// 5. exact enumeration identities
Outcome criterion5() {
  Outcome o;
  Stopwatch sw;
  double worst_sq = 0.0, worst_abs = 0.0, worst_mean = 0.0;
  for (std::uint64_t n = 1; n <= 5; ++n) {
    for (std::uint64_t m = 1; m <= 6; ++m) {
      std::vector<double> x(n);
      for (std::uint64_t i = 0; i < n; ++i) x[i] = 0.5 + static_cast<double>(i * i) - 1.25 * static_cast<double>(i);
      const double xbar = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
      long double e_sq = 0, e_mean = 0;
      for_each_weight_vector(n, m, [&](const WeightVector& w, double prob) {
        long double sq = 0, rm = 0;
        for (std::uint64_t i = 0; i < n; ++i) {
          const long double d = static_cast<long double>(w[i]) / m - 1.0L / n;
          sq += d * d;
          rm += static_cast<long double>(w[i]) * x[i] / m;
        }
        e_sq += prob * sq;
        e_mean += prob * rm;
      });
      const double want = (1.0 - 1.0 / static_cast<double>(n)) / static_cast<double>(m);
      worst_sq = std::max(worst_sq, std::abs(static_cast<double>(e_sq) - want));
      worst_mean = std::max(worst_mean, std::abs(static_cast<double>(e_mean) - xbar));
    }
  }
  for (std::uint64_t n = 1; n <= 6; ++n) {
    long double e_abs = 0;
    for_each_weight_vector(n, n, [&](const WeightVector& w, double prob) {
      long double s = 0;
      for (std::uint64_t i = 0; i < n; ++i) s += std::abs(static_cast<long double>(w[i]) / n - 1.0L / n);
      e_abs += prob * s;
    });
    const double want = 2.0 * std::pow(1.0 - 1.0 / static_cast<double>(n), static_cast<double>(n));
    worst_abs = std::max(worst_abs, std::abs(static_cast<double>(e_abs) - want));
    worst_abs = std::max(worst_abs, std::abs(exact_expectation_abs_dev(n) - want));
  }
  o.check(worst_sq <= 1e-12, fmt("E sum (w/m - 1/n)^2 = (1 - 1/n)/m for n<=5, m<=6: max error %.2e", worst_sq));
  o.check(worst_abs <= 1e-12, fmt("E sum |w/n - 1/n| = 2(1 - 1/n)^n for n<=6: max error %.2e", worst_abs));
  o.check(worst_mean <= 1e-12, fmt("E randomized mean = sample mean for n<=5, m<=6: max error %.2e", worst_mean));
  const double t = sw.seconds();
  o.check(t < 5.0, fmt("runtime %.3f s < 5 s", t));
  return o;
}

// 6. sixth central moment of w_1 against the closed-form expression (informational)
Outcome criterion6() {
  Outcome o;
  o.info(fmt("%6s %6s %16s %16s %10s  %s", "n", "m", "exact", "expression", "ratio", "verdict"));
  int exact = 0, upper = 0, below = 0;
  for (std::uint64_t n : {2ull, 3ull, 5ull, 10ull, 20ull, 100ull, 1000ull}) {
    for (double f : {0.5, 1.0, 2.0, 10.0}) {
      const auto m = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(f * static_cast<double>(n)));
      if (m > 10000) continue;
      const double e = exact_moment_w1(n, m, 6);
      const double x = sixth_moment_expression(n, m);
      const char* verdict = "expression below exact";
      if (std::abs(e - x) <= 1e-9 * std::abs(x)) {
        verdict = "equal";
        ++exact;
      } else if (x > e) {
        verdict = "upper bound";
        ++upper;
      } else {
        ++below;
      }
      o.info(fmt("%6llu %6llu %16.6f %16.6f %10.4f  %s", (unsigned long long)n, (unsigned long long)m, e, x, e / x,
                 verdict));
    }
  }
  o.check(true, fmt("audit ran: %d equal, %d upper bound, %d below exact", exact, upper, below));
  return o;
}

// 7. bound evaluator: second transcription, 1/n order, both sign modes
Outcome criterion7() {
  Outcome o;
  auto oracle = [](long double n, long double m) {
    const long double p = (n - 1) + std::pow(n - 1, 4) + n * (m - 1) * (n - 1) * (n - 1) + 4 * n * (n - 1) * m * m +
                          m * n * n * (n - 1) + n * (n - 1) + 4 * n * n * (n - 1);
    return p / (n * n * n * n) / (m * m * m);
  };
  double worst = 0.0;
  int points = 0;
  for (std::uint64_t n : {2ull, 3ull, 5ull, 10ull, 17ull, 100ull, 1000ull, 4096ull, 31623ull, 100000ull}) {
    for (double f : {0.01, 0.1, 0.3, 0.5, 1.0, 1.7, 2.0, 3.0, 7.0, 10.0}) {
      const auto m = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::llround(f * static_cast<double>(n))));
      const double lib = chebyshev_brace(n, m);
      const double ora = static_cast<double>(oracle(n, m));
      worst = std::max(worst, std::abs(lib - ora) / ora);
      ++points;
    }
  }
  o.check(points == 100 && worst <= 1e-12, fmt("%d grid points, max relative disagreement %.2e", points, worst));

  BoundInputs b;
  b.delta = 0.5;
  b.eps = 0.1;
  b.eps1 = 0.01;
  b.eps2 = 0.05;
  b.rho3 = 2.0;
  b.p_s2_dev = 0.01;
  b.n = b.m = 10000;
  const double b4 = theorem1_bound(b).raw;
  b.n = b.m = 100000;
  const double b5 = theorem1_bound(b).raw;
  o.check(b4 / b5 >= 5.0 && b4 / b5 <= 20.0,
          fmt("bound(1e4) = %.4e, bound(1e5) = %.4e, ratio %.3f in [5, 20]", b4, b5, b4 / b5));
  try {
    b.sign = DeltaSign::Strict;
    const double strict = theorem1_bound(b).raw;
    b.sign = DeltaSign::Corrected;
    const double corrected = theorem1_bound(b).raw;
    o.check(std::isfinite(strict) && std::isfinite(corrected),
            fmt("n=m=1e5: +eps2 mode %.4e, -eps2 mode %.4e", strict, corrected));
  } catch (const Error& e) {
    o.check(false, std::string("sign modes: ") + e.what());
  }
  return o;
}

// 8. sizing and rate arithmetic
Outcome criterion8() {
  Outcome o;
  const auto m1 = subsample_size(1000000, PowerDelta{0.25});
  const auto m2 = subsample_size(1000000, LogLog{});
  o.check(m1 == 31623, fmt("m for n=1e6, delta=1/4: %llu", (unsigned long long)m1));
  o.check(m2 == 2626, fmt("m for n=1e6, loglog: %llu", (unsigned long long)m2));
  const double r1 = rate(1000000, 31623, RateKind::D);
  o.check(std::abs(r1 - 1.0e-3) <= 1e-6, fmt("rate D at m=31623: %.6e", r1));
  const double r2 = rate(1000000, 2626, RateKind::D);
  const double lnln = std::log(std::log(1e6));
  const double want = 1.0 / (lnln * lnln);
  o.check(std::abs(r2 - want) <= 0.03 * want && std::abs(r2 - 0.145) < 0.0015,
          fmt("rate D at m=2626: %.5f vs 1/(ln ln 1e6)^2 = %.5f", r2, want));
  return o;
}

// 9. out-of-core mean interval: frugal reads and coverage of the full-scan mean
Outcome criterion9() {
  Outcome o;
  Stopwatch sw;
  const fs::path dir = fs::temp_directory_path() / "randpivot_acceptance";
  fs::create_directories(dir);
  const fs::path file = dir / "normal_3_2.rpv";
  double xbar = 0.0;
  {
    CounterRng rng(derive_stream(kSeed, {9}));
    const auto x = gen_sample(DistributionSpec::normal(3.0, 2.0), 1000000, rng);
    write_dataset(file, x);
    long double s = 0;
    for (double v : x) s += v;
    xbar = static_cast<double>(s / x.size());
  }
  const DatasetHandle h = DatasetHandle::open(file);
  std::uint64_t max_distinct = 0, max_read = 0;
  int hits = 0;
  const int reps = 200;
  for (int r = 0; r < reps; ++r) {
    CounterRng rng(derive_stream(kSeed, {static_cast<std::uint64_t>(r)}));
    const auto res = bigdata_ci_mean(h, 0.05, PowerDelta{0.25}, rng);
    max_distinct = std::max(max_distinct, res.report.distinct);
    max_read = std::max(max_read, res.report.io.records_read);
    hits += res.ci.contains(xbar) ? 1 : 0;
  }
  fs::remove_all(dir);
  const double cov = static_cast<double>(hits) / reps;
  const double t = sw.seconds();
  o.check(max_read <= 32000 && max_read == max_distinct,
          fmt("records read per interval: at most %llu (distinct %llu) of 1000000", (unsigned long long)max_read,
              (unsigned long long)max_distinct));
  o.check(cov >= 0.91 && cov <= 0.99, fmt("coverage of the full-scan mean %.4f over %d runs: %.3f", xbar, reps, cov));
  o.check(t < 60.0, fmt("runtime %.1f s < 60 s", t));
  return o;
}

// 10. EDF pivots, DKW and distribution-function coverage
Outcome criterion10() {
  Outcome o;
  CounterRng rng(derive_stream(kSeed, {10}));
  int checked = 0, equal = 0;
  double worst = 0.0;
  while (checked < 100) {
    const std::size_t n = 5 + rng.below(60);
    const std::uint64_t m = 2 + rng.below(3 * n);
    std::vector<double> data(n), ind(n);
    for (auto& v : data) v = rng.uniform();
    const double x = rng.uniform();
    const auto w = draw_weights(n, m, rng);
    for (std::size_t i = 0; i < n; ++i) ind[i] = data[i] <= x ? 1.0 : 0.0;
    if (weight_stats(w).equal_weights || sample_stats(ind).zero_variance()) continue;
    const double a = edf_pivot(EdfPivotKind::Hat1, data, w, x);
    const double b = pivot(PivotKind::T1, ind, w);
    worst = std::max(worst, std::abs(a - b) / std::max(1.0, std::abs(b)));
    equal += a == b ? 1 : 0;
    ++checked;
  }
  o.check(worst <= 1e-12, fmt("hat1 vs T1 on indicators, 100 triples: %d bit-identical, max relative gap %.2e",
                              equal, worst));

  double dkw_worst = 0.0;
  for (double eps : {1e-4, 5e-4, 1e-3, 0.002, 0.003}) {
    const double want = 2.0 * std::exp(-2.0 * eps * eps * 1e6);
    if (want < 1.0) dkw_worst = std::max(dkw_worst, std::abs(dkw_bound(1000000, eps) - want) / want);
  }
  o.check(dkw_worst <= 1e-15, fmt("DKW bound at n=1e6: max relative error %.2e", dkw_worst));

  const auto u = DistributionSpec::uniform(0.0, 1.0);
  int hits = 0, valid = 0;
  for (std::uint64_t r = 0; r < 2000; ++r) {
    CounterRng g(derive_stream(kSeed, {r, 10}));
    const auto data = gen_sample(u, 200, g);
    const auto w = draw_weights(200, 200, g);
    try {
      hits += ci_df(data, w, 0.5, 0.05).contains(0.5) ? 1 : 0;
      ++valid;
    } catch (const Error&) {
    }
  }
  const double cov = static_cast<double>(hits) / valid;
  o.check(cov >= 0.91 && cov <= 0.98, fmt("coverage of F(0.5) by the df interval, Uniform(0,1), n=m=200: %.4f (%d runs)",
                                          cov, valid));
  return o;
}

// 11. CLI output does not depend on --threads
Outcome criterion11() {
  Outcome o;
  const fs::path dir = fs::temp_directory_path() / "randpivot_acceptance_cli";
  fs::create_directories(dir);
  {
    std::ofstream csv(dir / "x.csv");
    CounterRng rng(derive_stream(kSeed, {11}));
    for (double v : gen_sample(DistributionSpec::exponential(1.0), 3000, rng)) csv << v << "\n";
  }
  const std::string csv = (dir / "x.csv").string(), rpv = (dir / "x.rpv").string();
  std::ostringstream sink, sink_err;
  cli::run({"ingest", "--csv", csv, "--out", rpv}, sink, sink_err);

  const std::vector<std::vector<std::string>> commands{
      {"coverage", "--dist", "exponential:1", "--n", "20", "--reps", "2000"},
      {"coverage", "--preset", "table1"},
      {"proportion", "--dist", "poisson:1", "--n", "20", "--outer", "40", "--inner", "100"},
      {"kdist", "--dist", "normal:0,1", "--n", "30", "--reps", "10000"},
      {"ci-mean", "--data", csv},
      {"ci-edf", "--data", csv, "--x", "1", "--target", "df"},
      {"ci-bigdata", "--dataset", rpv},
      {"sizing", "--n", "1000000"},
      {"rate", "--n", "1000", "--m", "1000", "--kind", "all"},
  };
  for (const auto& cmd : commands) {
    std::string first;
    bool same = true;
    int code = 0;
    for (const char* threads : {"1", "2", "5"}) {
      for (const char* format : {"json", "csv"}) {
        std::vector<std::string> args{"--seed", "1", "--no-timestamp", "--threads", threads, "--format", format};
        args.insert(args.end(), cmd.begin(), cmd.end());
        std::ostringstream out, err;
        code = std::max(code, cli::run(args, out, err));
        const std::string key = std::string(format) + "\n" + out.str();
        if (std::string(format) == "json") {
          if (first.empty()) first = key;
          same = same && key == first;
        }
      }
    }
    std::string line;
    for (const auto& a : cmd) line += a + " ";
    o.check(same && code == 0, fmt("%sexit %d, identical across 1/2/5 threads", line.c_str(), code));
  }
  fs::remove_all(dir);
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"G1 one-sided coverage at reference cells", criterion1},
      {"G1 nearer nominal than classical T (normal cutoff)", criterion2},
      {"in-band proportion: G1 dominance and proximity", criterion3},
      {"Kolmogorov distance rate", criterion4},
      {"exact enumeration identities", criterion5},
      {"sixth-moment audit", criterion6},
      {"bound evaluator", criterion7},
      {"sizing and rate arithmetic", criterion8},
      {"big-data frugality and coverage", criterion9},
      {"EDF suite", criterion10},
      {"CLI determinism across thread counts", criterion11},
  };
  int failures = 0;
  int index = 0;
  for (const auto& [name, run] : criteria) {
    ++index;
    Outcome o;
    Stopwatch sw;
    try {
      o = run();
    } catch (const std::exception& e) {
      o.check(false, std::string("threw: ") + e.what());
    }
    std::printf("%s  %2d  %s  (%.1f s)\n", o.pass ? "PASS" : "FAIL", index, name, sw.seconds());
    for (const auto& d : o.details) std::printf("%s\n", d.c_str());
    std::fflush(stdout);
    failures += o.pass ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
