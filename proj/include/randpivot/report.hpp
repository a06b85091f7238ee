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

#ifndef RANDPIVOT_REPORT_HPP
#define RANDPIVOT_REPORT_HPP

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "randpivot/bigdata.hpp"
#include "randpivot/bounds.hpp"
#include "randpivot/intervals.hpp"
#include "randpivot/mc.hpp"

namespace randpivot {

/// One flat, ordered result row. Nested objects are flattened with dotted
/// keys for CSV.
using Record = nlohmann::ordered_json;

enum class OutputFormat { Csv, Json };
OutputFormat parse_output_format(std::string_view text);

inline constexpr int kSchemaVersion = 1;

Record record(const ConfidenceInterval& ci);
Record record(const SubsampleReport& r);
Record record(const CoverageReport& r);
Record record(const ProportionReport& r);
Record record(const KdistReport& r);
Record record(const BoundInputs& in, const BoundValue& v);

/// JSON: {"schema": "randpivot.<kind>/1", ["generated_at": ...,] "results": [...]}.
/// CSV: a header from the first row's keys, then one line per row, no
/// timestamp. Non-finite numbers are written as null in JSON and as
/// inf / -inf / nan in CSV.
std::string render(const std::vector<Record>& rows, std::string_view kind, OutputFormat fmt,
                   bool timestamp);

}  // namespace randpivot

#endif  // RANDPIVOT_REPORT_HPP
