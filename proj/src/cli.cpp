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

#include "randpivot/cli.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <ostream>

#include <CLI11.hpp>

#include "randpivot/bigdata.hpp"
#include "randpivot/bounds.hpp"
#include "randpivot/edf.hpp"
#include "randpivot/error.hpp"
#include "randpivot/intervals.hpp"
#include "randpivot/mc.hpp"
#include "randpivot/pivots.hpp"
#include "randpivot/report.hpp"

namespace randpivot::cli {

namespace {

struct Globals {
  std::uint64_t seed = 1;
  std::string format = "json";
  unsigned threads = 1;
  bool no_timestamp = false;
};

struct CsvFlags {
  std::string column = "0";
  bool header = false;
  char delimiter = ',';

  CsvOptions options() const {
    CsvOptions o;
    o.header = header;
    o.delimiter = delimiter;
    const bool numeric = !column.empty() && std::all_of(column.begin(), column.end(),
                                                        [](unsigned char c) { return std::isdigit(c); });
    if (numeric) {
      o.column = static_cast<std::size_t>(std::stoull(column));
    } else {
      o.column = column;
    }
    return o;
  }
};

void add_csv_flags(CLI::App* cmd, CsvFlags& f) {
  cmd->add_option("--column", f.column, "Column to read: 0-based position or header name");
  cmd->add_flag("--header", f.header, "First non-blank line is a header row");
  cmd->add_option("--delimiter", f.delimiter, "Field delimiter");
}

/// "equal-n", an integer, or a sizing policy.
std::uint64_t resolve_m(const std::string& spec, std::uint64_t n) {
  if (spec == "equal-n") return n;
  return subsample_size(n, parse_sizing_policy(spec));
}

SizingPolicy resolve_policy(const std::string& spec, std::uint64_t n) {
  if (spec == "equal-n") return Fixed{n};
  return parse_sizing_policy(spec);
}

std::optional<double> resolve_cutoff(const std::string& spec, std::uint64_t n) {
  if (spec.empty()) return std::nullopt;
  if (spec == "t") return student_t_cutoff(n);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(spec, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != spec.size()) throw Error(ErrorCode::BadParams, "cutoff must be a number or 't'");
  return v;
}

CounterRng command_rng(std::uint64_t seed) { return CounterRng(derive_stream(seed, {})); }

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Randomized pivots, confidence intervals and coverage studies", "randpivot"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", "randpivot 1.0.0");

  Globals g;
  auto* seed_opt = app.add_option("--seed", g.seed, "Root seed (falls back to RANDPIVOT_SEED)");
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--threads", g.threads, "Worker threads for coverage, proportion and kdist")
      ->check(CLI::Range(1u, 1024u));
  app.add_flag("--no-timestamp", g.no_timestamp, "Omit the generated_at field from JSON output");

  std::vector<Record> rows;
  std::string kind;
  std::function<void()> action;

  // ingest -----------------------------------------------------------------
  auto* ingest = app.add_subcommand("ingest", "Convert one CSV column to the binary dataset format");
  std::string ingest_src, ingest_dst;
  CsvFlags ingest_csv_flags;
  ingest->add_option("--csv", ingest_src, "Input CSV file")->required();
  ingest->add_option("--out", ingest_dst, "Output dataset file")->required();
  add_csv_flags(ingest, ingest_csv_flags);
  ingest->callback([&] {
    action = [&] {
      const DatasetHandle h = ingest_csv(ingest_src, ingest_csv_flags.options(), ingest_dst);
      Record r;
      r["path"] = h.path().string();
      r["count"] = h.count();
      r["bytes"] = kHeaderBytes + kRecordBytes * h.count();
      rows.push_back(r);
      kind = "ingest";
    };
  });

  // ci-mean ----------------------------------------------------------------
  auto* ci_mean = app.add_subcommand("ci-mean", "Interval for the population mean (g1, g2) or sample mean (t2)");
  std::string cm_data, cm_variant = "g1", cm_m = "equal-n", cm_sided = "two-sided", cm_scale = "population";
  double cm_alpha = 0.05;
  CsvFlags cm_csv;
  ci_mean->add_option("--data", cm_data, "Input CSV file")->required();
  add_csv_flags(ci_mean, cm_csv);
  ci_mean->add_option("--alpha", cm_alpha, "Significance level")->check(CLI::Range(0.0, 1.0));
  ci_mean->add_option("--variant", cm_variant, "g1, g2 or t2")->check(CLI::IsMember({"g1", "g2", "t2"}));
  ci_mean->add_option("--m", cm_m, "Weight total: equal-n, an integer, or a sizing policy");
  ci_mean->add_option("--sided", cm_sided, "two-sided, upper or lower");
  ci_mean->add_option("--scale", cm_scale, "Divisor for S_n: population (n) or unbiased (n-1)");
  ci_mean->callback([&] {
    action = [&] {
      const std::vector<double> x = read_csv_column(cm_data, cm_csv.options());
      if (x.size() < 2) throw Error(ErrorCode::TooFewObservations, "need at least 2 observations");
      const std::uint64_t m = resolve_m(cm_m, x.size());
      CounterRng rng = command_rng(g.seed);
      const WeightVector w = draw_weights(x.size(), m, rng);
      const Sidedness sided = parse_sidedness(cm_sided);
      ConfidenceInterval ci;
      if (cm_variant == "t2") {
        ci = ci_xbar(randomized_stats(x, w), weight_stats(w), cm_alpha, sided);
      } else {
        ci = ci_mu(x, w, cm_alpha, parse_pivot_kind(cm_variant), {sided, parse_scale_convention(cm_scale)});
      }
      Record r = record(ci);
      r["seed"] = g.seed;
      rows.push_back(r);
      kind = "interval";
    };
  });

  // ci-bigdata -------------------------------------------------------------
  auto* ci_big = app.add_subcommand("ci-bigdata", "Interval from a binary dataset, reading only sampled records");
  std::string cb_dataset, cb_m = "power-delta:0.25", cb_sided = "two-sided";
  double cb_alpha = 0.05;
  std::optional<double> cb_x, cb_dkw;
  ci_big->add_option("--dataset", cb_dataset, "Binary dataset file")->required();
  ci_big->add_option("--alpha", cb_alpha, "Significance level")->check(CLI::Range(0.0, 1.0));
  ci_big->add_option("--m", cb_m, "Sizing: power-delta:D, loglog, fixed:M, an integer, or equal-n");
  ci_big->add_option("--sided", cb_sided, "two-sided, upper or lower");
  ci_big->add_option("--x", cb_x, "Evaluate the distribution function at x instead of the mean");
  ci_big->add_option("--dkw-eps", cb_dkw, "Report the DKW bound for this eps (with --x)");
  ci_big->callback([&] {
    action = [&] {
      const DatasetHandle h = DatasetHandle::open(cb_dataset);
      const SizingPolicy policy = resolve_policy(cb_m, h.count());
      CounterRng rng = command_rng(g.seed);
      const Sidedness sided = parse_sidedness(cb_sided);
      const BigdataResult res = cb_x ? bigdata_ci_edf(h, *cb_x, cb_alpha, policy, rng, sided, cb_dkw)
                                     : bigdata_ci_mean(h, cb_alpha, policy, rng, sided);
      Record r = record(res.ci);
      if (cb_x) r["x"] = *cb_x;
      r["subsample"] = record(res.report);
      r["seed"] = g.seed;
      rows.push_back(r);
      kind = "bigdata";
    };
  });

  // ci-edf -----------------------------------------------------------------
  auto* ci_edf_cmd = app.add_subcommand("ci-edf", "Interval for F_n(x) (target edf) or F(x) (target df)");
  std::string ce_data, ce_target = "edf", ce_m = "equal-n", ce_sided = "two-sided";
  double ce_alpha = 0.05;
  double ce_x = 0.0;
  CsvFlags ce_csv;
  ci_edf_cmd->add_option("--data", ce_data, "Input CSV file")->required();
  add_csv_flags(ci_edf_cmd, ce_csv);
  ci_edf_cmd->add_option("--x", ce_x, "Evaluation point")->required();
  ci_edf_cmd->add_option("--alpha", ce_alpha, "Significance level")->check(CLI::Range(0.0, 1.0));
  ci_edf_cmd->add_option("--target", ce_target, "edf or df")->check(CLI::IsMember({"edf", "df"}));
  ci_edf_cmd->add_option("--m", ce_m, "Weight total: equal-n, an integer, or a sizing policy");
  ci_edf_cmd->add_option("--sided", ce_sided, "two-sided, upper or lower");
  ci_edf_cmd->callback([&] {
    action = [&] {
      const std::vector<double> x = read_csv_column(ce_data, ce_csv.options());
      if (x.size() < 2) throw Error(ErrorCode::TooFewObservations, "need at least 2 observations");
      CounterRng rng = command_rng(g.seed);
      const WeightVector w = draw_weights(x.size(), resolve_m(ce_m, x.size()), rng);
      const Sidedness sided = parse_sidedness(ce_sided);
      const EdfPoint p = edf_point(x, w, ce_x);
      const ConfidenceInterval ci =
          ce_target == "df" ? ci_df(x, w, ce_x, ce_alpha, sided) : ci_edf(x, w, ce_x, ce_alpha, sided);
      Record r = record(ci);
      r["x"] = ce_x;
      r["f_n"] = p.f_n;
      r["f_mn"] = p.f_mn;
      r["f_hat"] = p.f_hat;
      r["seed"] = g.seed;
      rows.push_back(r);
      kind = "interval";
    };
  });

  // coverage ---------------------------------------------------------------
  auto* coverage = app.add_subcommand("coverage", "Monte Carlo coverage of a pivot");
  std::string cv_dist = "normal:0,1", cv_m = "equal-n", cv_pivot = "g1", cv_sided = "upper",
              cv_scale = "population", cv_cutoff, cv_preset;
  std::uint64_t cv_n = 20, cv_reps = 1000;
  double cv_alpha = 0.05;
  coverage->add_option("--dist", cv_dist, "Distribution, e.g. normal:0,1 or binomial:10,0.1");
  coverage->add_option("--n", cv_n, "Sample size")->check(CLI::Range(std::uint64_t{2}, std::uint64_t{1} << 40));
  coverage->add_option("--m", cv_m, "Weight total: equal-n, an integer, or a sizing policy");
  coverage->add_option("--pivot", cv_pivot, "t1, t2, g1, g2 or classical-t");
  coverage->add_option("--reps", cv_reps, "Replications")->check(CLI::PositiveNumber);
  coverage->add_option("--alpha", cv_alpha, "Significance level")->check(CLI::Range(0.0, 1.0));
  coverage->add_option("--sided", cv_sided, "two-sided, upper or lower");
  coverage->add_option("--cutoff", cv_cutoff, "Override the normal quantile with a number, or 't' for Student");
  coverage->add_option("--scale", cv_scale, "Divisor for S_n: population (n) or unbiased (n-1)");
  coverage->add_option("--preset", cv_preset, "Run every cell of a preset (table1)");
  coverage->callback([&] {
    action = [&] {
      kind = "coverage";
      auto run_cell = [&](const DistributionSpec& d, std::uint64_t n, StudyPivot pv, std::optional<double> cut,
                          Sidedness sided, ScaleConvention scale, double alpha, std::uint64_t reps) {
        CoverageConfig c;
        c.dist = d;
        c.n = n;
        c.m = resolve_m(cv_m, n);
        c.pivot = pv;
        c.reps = reps;
        c.alpha = alpha;
        c.sided = sided;
        c.cutoff = cut;
        c.scale = scale;
        c.seed = g.seed;
        c.threads = g.threads;
        return record(coverage_study(c));
      };
      if (!cv_preset.empty()) {
        const Preset p = preset(cv_preset);
        if (p.proportion) throw Error(ErrorCode::BadParams, "preset '" + cv_preset + "' is a proportion preset");
        for (const PresetCell& cell : p.cells) {
          Record r = run_cell(cell.dist, cell.n, cell.pivot, cell.cutoff, p.sided, p.scale, p.alpha, p.reps);
          r["reference"] = cell.reference;
          rows.push_back(r);
        }
        return;
      }
      const DistributionSpec d = parse_distribution(cv_dist);
      rows.push_back(run_cell(d, cv_n, parse_study_pivot(cv_pivot), resolve_cutoff(cv_cutoff, cv_n),
                              parse_sidedness(cv_sided), parse_scale_convention(cv_scale), cv_alpha, cv_reps));
    };
  });

  // proportion -------------------------------------------------------------
  auto* proportion = app.add_subcommand("proportion", "Share of estimated coverages inside a band");
  std::string pr_dist = "normal:0,1", pr_m = "equal-n", pr_pivot = "g1", pr_sided = "upper",
              pr_scale = "population", pr_cutoff, pr_preset;
  std::uint64_t pr_n = 20, pr_outer = 500, pr_inner = 500;
  double pr_alpha = 0.05, pr_lo = 0.94, pr_hi = 0.96;
  proportion->add_option("--dist", pr_dist, "Distribution, e.g. poisson:1");
  proportion->add_option("--n", pr_n, "Sample size")->check(CLI::Range(std::uint64_t{2}, std::uint64_t{1} << 40));
  proportion->add_option("--m", pr_m, "Weight total: equal-n, an integer, or a sizing policy");
  proportion->add_option("--pivot", pr_pivot, "t1, t2, g1, g2 or classical-t");
  proportion->add_option("--outer", pr_outer, "Outer replications (coverage estimates)")->check(CLI::PositiveNumber);
  proportion->add_option("--inner", pr_inner, "Inner replications per estimate")->check(CLI::PositiveNumber);
  proportion->add_option("--band-lo", pr_lo, "Lower band edge");
  proportion->add_option("--band-hi", pr_hi, "Upper band edge");
  proportion->add_option("--alpha", pr_alpha, "Significance level")->check(CLI::Range(0.0, 1.0));
  proportion->add_option("--sided", pr_sided, "two-sided, upper or lower");
  proportion->add_option("--cutoff", pr_cutoff, "Override the normal quantile with a number, or 't' for Student");
  proportion->add_option("--scale", pr_scale, "Divisor for S_n: population (n) or unbiased (n-1)");
  proportion->add_option("--preset", pr_preset, "Run every cell of a preset (table2, table3, table3-std)");
  proportion->callback([&] {
    action = [&] {
      kind = "proportion";
      auto run_cell = [&](const DistributionSpec& d, std::uint64_t n, StudyPivot pv, std::optional<double> cut,
                          Sidedness sided, ScaleConvention scale, double alpha, std::uint64_t outer,
                          std::uint64_t inner) {
        ProportionConfig c;
        c.dist = d;
        c.n = n;
        c.m = resolve_m(pr_m, n);
        c.pivot = pv;
        c.outer_reps = outer;
        c.inner_reps = inner;
        c.band = {pr_lo, pr_hi};
        c.alpha = alpha;
        c.sided = sided;
        c.cutoff = cut;
        c.scale = scale;
        c.seed = g.seed;
        c.threads = g.threads;
        return record(proportion_study(c));
      };
      if (!pr_preset.empty()) {
        const Preset p = preset(pr_preset);
        if (!p.proportion) throw Error(ErrorCode::BadParams, "preset '" + pr_preset + "' is a coverage preset");
        for (const PresetCell& cell : p.cells) {
          Record r = run_cell(cell.dist, cell.n, cell.pivot, cell.cutoff, p.sided, p.scale, p.alpha, pr_outer,
                              pr_inner);
          r["reference"] = cell.reference;
          rows.push_back(r);
        }
        return;
      }
      const DistributionSpec d = parse_distribution(pr_dist);
      rows.push_back(run_cell(d, pr_n, parse_study_pivot(pr_pivot), resolve_cutoff(pr_cutoff, pr_n),
                              parse_sidedness(pr_sided), parse_scale_convention(pr_scale), pr_alpha, pr_outer,
                              pr_inner));
    };
  });

  // kdist ------------------------------------------------------------------
  auto* kdist = app.add_subcommand("kdist", "Kolmogorov distance between a pivot's law and N(0,1)");
  std::string kd_dist = "normal:0,1", kd_m = "equal-n", kd_pivot = "g1", kd_scale = "population";
  std::uint64_t kd_n = 100, kd_reps = 100000;
  kdist->add_option("--dist", kd_dist, "Distribution");
  kdist->add_option("--n", kd_n, "Sample size")->check(CLI::Range(std::uint64_t{2}, std::uint64_t{1} << 40));
  kdist->add_option("--m", kd_m, "Weight total: equal-n, an integer, or a sizing policy");
  kdist->add_option("--pivot", kd_pivot, "t1, t2, g1, g2 or classical-t");
  kdist->add_option("--reps", kd_reps, "Replications (at least 10000)");
  kdist->add_option("--scale", kd_scale, "Divisor for S_n: population (n) or unbiased (n-1)");
  kdist->callback([&] {
    action = [&] {
      KdistConfig c;
      c.dist = parse_distribution(kd_dist);
      c.n = kd_n;
      c.m = resolve_m(kd_m, kd_n);
      c.pivot = parse_study_pivot(kd_pivot);
      c.reps = kd_reps;
      c.scale = parse_scale_convention(kd_scale);
      c.seed = g.seed;
      c.threads = g.threads;
      rows.push_back(record(kolmogorov_distance(c)));
      kind = "kdist";
    };
  });

  // bound ------------------------------------------------------------------
  auto* bound = app.add_subcommand("bound", "Explicit bound on the normal-approximation error of the pivots");
  BoundInputs bi;
  std::string bd_m = "equal-n", bd_sign = "corrected", bd_part = "A";
  std::optional<double> bd_p, bd_sigma2, bd_mu4, bd_threshold;
  bound->add_option("--n", bi.n, "Sample size")->required();
  bound->add_option("--m", bd_m, "Weight total: equal-n, an integer, or a sizing policy");
  bound->add_option("--delta", bi.delta, "Deviation level delta in (0,1)")->required();
  bound->add_option("--eps", bi.eps, "eps in (0,1)")->required();
  bound->add_option("--eps1", bi.eps1, "eps1 > 0")->required();
  bound->add_option("--eps2", bi.eps2, "eps2 > 0")->required();
  bound->add_option("--rho3", bi.rho3, "E|X - mu|^3 / sigma^(3/2)")->required();
  bound->add_option("--p", bd_p, "P(|S_n^2 - sigma^2| > eps1^2); or give --sigma2 and --mu4");
  bound->add_option("--sigma2", bd_sigma2, "Variance, for the Chebyshev estimate of --p");
  bound->add_option("--mu4", bd_mu4, "Fourth central moment, for the Chebyshev estimate of --p");
  bound->add_option("--c-be", bi.c_be, "Berry-Esseen constant");
  bound->add_option("--sign", bd_sign, "corrected or strict")->check(CLI::IsMember({"corrected", "strict"}));
  bound->add_option("--part", bd_part, "A (G pivot) or B (T pivot)")->check(CLI::IsMember({"A", "B"}));
  bound->add_option("--threshold", bd_threshold, "Deviation level reported with the bound (default delta)");
  bound->callback([&] {
    action = [&] {
      bi.m = resolve_m(bd_m, bi.n);
      if (bd_p) {
        bi.p_s2_dev = *bd_p;
      } else if (bd_sigma2 && bd_mu4) {
        bi.p_s2_dev = chebyshev_p_s2(bi.n, bi.eps1, *bd_sigma2, *bd_mu4);
      } else {
        throw Error(ErrorCode::BadParams, "give --p or both --sigma2 and --mu4");
      }
      bi.sign = bd_sign == "strict" ? DeltaSign::Strict : DeltaSign::Corrected;
      const BoundPart part = bd_part == "B" ? BoundPart::B : BoundPart::A;
      const BoundValue v = theorem1_bound(bi, part, bd_threshold.value_or(bi.delta));
      rows.push_back(record(bi, v));
      kind = "bound";
    };
  });

  // rate -------------------------------------------------------------------
  auto* rate_cmd = app.add_subcommand("rate", "Convergence rate max(m/n^2, 1/m[, n/m^2])");
  std::uint64_t rt_n = 0;
  std::string rt_m = "equal-n", rt_kind = "D";
  rate_cmd->add_option("--n", rt_n, "Sample size")->required()->check(CLI::PositiveNumber);
  rate_cmd->add_option("--m", rt_m, "Weight total: equal-n, an integer, or a sizing policy");
  rate_cmd->add_option("--kind", rt_kind, "A, B, C, D or all");
  rate_cmd->callback([&] {
    action = [&] {
      const std::uint64_t m = rt_m == "equal-n" ? rt_n : resolve_m(rt_m, rt_n);
      std::vector<RateKind> kinds;
      if (rt_kind == "all") {
        kinds = {RateKind::A, RateKind::B, RateKind::C, RateKind::D};
      } else {
        kinds = {parse_rate_kind(rt_kind)};
      }
      for (RateKind k : kinds) {
        Record r;
        r["n"] = rt_n;
        r["m"] = m;
        r["kind"] = to_string(k);
        r["rate"] = rate(rt_n, m, k);
        rows.push_back(r);
      }
      kind = "rate";
    };
  });

  // sizing -----------------------------------------------------------------
  auto* sizing = app.add_subcommand("sizing", "Sub-sample size m for a dataset of size n");
  std::uint64_t sz_n = 0;
  std::string sz_policy = "power-delta:0.25";
  sizing->add_option("--n", sz_n, "Dataset size")->required()->check(CLI::PositiveNumber);
  sizing->add_option("--policy", sz_policy, "power-delta:D, loglog, fixed:M or an integer");
  sizing->callback([&] {
    action = [&] {
      const SizingPolicy p = parse_sizing_policy(sz_policy);
      Record r;
      r["n"] = sz_n;
      r["policy"] = to_string(p);
      r["m"] = subsample_size(sz_n, p);
      rows.push_back(r);
      kind = "sizing";
    };
  });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (seed_opt->count() == 0) {
      if (const char* env = std::getenv("RANDPIVOT_SEED"); env && *env) {
        const std::string s(env);
        std::size_t used = 0;
        try {
          g.seed = std::stoull(s, &used, 0);
        } catch (const std::exception&) {
          used = 0;
        }
        if (used == 0 || used != s.size()) throw Error(ErrorCode::BadParams, "RANDPIVOT_SEED is not an integer");
      }
    }
    const OutputFormat fmt = parse_output_format(g.format);
    if (action) action();
    out << render(rows, kind, fmt, !g.no_timestamp);
    return kExitOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.code() == ErrorCode::BadParams ? kExitUsage : kExitError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
}

}  // namespace randpivot::cli
