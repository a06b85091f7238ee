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

#include "randpivot/report.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <sstream>

#include "randpivot/error.hpp"

namespace randpivot {

namespace {

void flatten(const Record& j, const std::string& prefix, std::vector<std::pair<std::string, const Record*>>& out) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, out);
    return;
  }
  out.emplace_back(prefix, &j);
}

std::string csv_cell(const Record& v) {
  if (v.is_null()) return "";
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (std::isnan(d)) return "nan";
    if (std::isinf(d)) return d > 0 ? "inf" : "-inf";
    return v.dump();
  }
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
      if (c == '"') q += '"';
      q += c;
    }
    return q + "\"";
  }
  if (v.is_array()) {
    std::string s;
    for (const auto& e : v) s += (s.empty() ? "" : ";") + csv_cell(e);
    return s;
  }
  return v.dump();
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Record optional_number(const std::optional<double>& v) { return v ? Record(*v) : Record(nullptr); }

}  // namespace

OutputFormat parse_output_format(std::string_view text) {
  if (text == "csv") return OutputFormat::Csv;
  if (text == "json") return OutputFormat::Json;
  throw Error(ErrorCode::BadParams, "format must be csv or json");
}

Record record(const ConfidenceInterval& ci) {
  Record r;
  r["target"] = to_string(ci.target);
  r["level"] = ci.level;
  r["sided"] = to_string(ci.sided);
  r["lower"] = ci.lower;
  r["upper"] = ci.upper;
  r["center"] = ci.center;
  r["half_width"] = ci.half_width;
  r["critical"] = ci.critical;
  r["n"] = ci.meta.n;
  r["m"] = ci.meta.m;
  r["pivot"] = ci.meta.pivot;
  r["raw_lower"] = ci.meta.raw_lower;
  r["raw_upper"] = ci.meta.raw_upper;
  r["clamped"] = ci.meta.clamped;
  r["note"] = ci.meta.note;
  return r;
}

Record record(const SubsampleReport& s) {
  Record r;
  r["n"] = s.n;
  r["m"] = s.m;
  r["policy"] = s.policy;
  r["distinct"] = s.distinct;
  r["records_read"] = s.io.records_read;
  r["bytes_read"] = s.io.bytes_read;
  r["read_calls"] = s.io.read_calls;
  r["rate_d"] = s.rate_d;
  r["dkw_eps"] = optional_number(s.dkw_eps);
  r["dkw"] = optional_number(s.dkw);
  return r;
}

Record record(const CoverageReport& c) {
  Record r;
  r["dist"] = to_string(c.config.dist);
  r["n"] = c.config.n;
  r["m"] = c.config.m;
  r["pivot"] = to_string(c.config.pivot);
  r["reps"] = c.config.reps;
  r["alpha"] = c.config.alpha;
  r["sided"] = to_string(c.config.sided);
  r["scale"] = to_string(c.config.scale);
  r["critical"] = c.critical;
  r["hits"] = c.hits;
  r["coverage"] = c.coverage;
  r["std_error"] = c.std_error;
  r["degenerate_count"] = c.degenerate_count;
  r["seed"] = c.config.seed;
  return r;
}

Record record(const ProportionReport& p) {
  Record r;
  r["dist"] = to_string(p.config.dist);
  r["n"] = p.config.n;
  r["m"] = p.config.m;
  r["pivot"] = to_string(p.config.pivot);
  r["outer_reps"] = p.config.outer_reps;
  r["inner_reps"] = p.config.inner_reps;
  r["band_lo"] = p.config.band[0];
  r["band_hi"] = p.config.band[1];
  r["alpha"] = p.config.alpha;
  r["sided"] = to_string(p.config.sided);
  r["scale"] = to_string(p.config.scale);
  r["critical"] = p.critical;
  r["in_band"] = p.in_band;
  r["proportion"] = p.proportion;
  r["mean_coverage"] = p.mean_coverage;
  r["degenerate_count"] = p.degenerate_count;
  r["seed"] = p.config.seed;
  return r;
}

Record record(const KdistReport& k) {
  Record r;
  r["dist"] = to_string(k.config.dist);
  r["n"] = k.config.n;
  r["m"] = k.config.m;
  r["pivot"] = to_string(k.config.pivot);
  r["reps"] = k.config.reps;
  r["scale"] = to_string(k.config.scale);
  r["grid_points"] = kKdistGridPoints;
  r["distance"] = k.distance;
  r["argmax"] = k.argmax;
  r["degenerate_count"] = k.degenerate_count;
  r["seed"] = k.config.seed;
  return r;
}

Record record(const BoundInputs& in, const BoundValue& v) {
  Record r;
  r["n"] = in.n;
  r["m"] = in.m;
  r["delta"] = in.delta;
  r["eps"] = in.eps;
  r["eps1"] = in.eps1;
  r["eps2"] = in.eps2;
  r["rho3"] = in.rho3;
  r["p_s2_dev"] = in.p_s2_dev;
  r["c_be"] = in.c_be;
  r["sign"] = in.sign == DeltaSign::Corrected ? "corrected" : "strict";
  r["part"] = v.part == BoundPart::A ? "A" : "B";
  r["threshold"] = v.threshold;
  r["delta_n"] = v.delta_n;
  r["pi1"] = v.pi1;
  r["pi2"] = v.pi2;
  r["raw"] = v.raw;
  r["bound"] = v.capped;
  return r;
}

std::string render(const std::vector<Record>& rows, std::string_view kind, OutputFormat fmt, bool timestamp) {
  if (fmt == OutputFormat::Json) {
    Record doc;
    doc["schema"] = "randpivot." + std::string(kind) + "/" + std::to_string(kSchemaVersion);
    if (timestamp) doc["generated_at"] = utc_now();
    doc["results"] = Record::array();
    for (const Record& r : rows) doc["results"].push_back(r);
    return doc.dump(2) + "\n";
  }
  std::ostringstream os;
  if (rows.empty()) return "";
  std::vector<std::pair<std::string, const Record*>> cells;
  flatten(rows.front(), "", cells);
  for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i].first;
  os << "\n";
  for (const Record& r : rows) {
    cells.clear();
    flatten(r, "", cells);
    for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << csv_cell(*cells[i].second);
    os << "\n";
  }
  return os.str();
}

}  // namespace randpivot
