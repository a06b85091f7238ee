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

#ifndef RANDPIVOT_BIGDATA_HPP
#define RANDPIVOT_BIGDATA_HPP

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "randpivot/intervals.hpp"
#include "randpivot/rng.hpp"
#include "randpivot/weights.hpp"

namespace randpivot {

// On-disk layout, all little-endian:
//   offset 0  : magic "RPV1"
//   offset 4  : u32 version (1)
//   offset 8  : u64 record count n
//   offset 16 : n x f64
inline constexpr char kDatasetMagic[4] = {'R', 'P', 'V', '1'};
inline constexpr std::uint32_t kDatasetVersion = 1;
inline constexpr std::uint64_t kHeaderBytes = 16;
inline constexpr std::uint64_t kRecordBytes = 8;
inline constexpr std::uint64_t kCoalesceWindow = 4096;
inline constexpr std::uint64_t kMinDatasetCount = 16;

/// A validated, read-only dataset file.
class DatasetHandle {
 public:
  /// Checks magic, version and that the file size is 16 + 8 n.
  /// Throws IoError if the file cannot be read, BadFormat otherwise.
  static DatasetHandle open(const std::filesystem::path& path);

  const std::filesystem::path& path() const noexcept { return path_; }
  std::uint64_t count() const noexcept { return count_; }

 private:
  DatasetHandle(std::filesystem::path p, std::uint64_t n) : path_(std::move(p)), count_(n) {}
  std::filesystem::path path_;
  std::uint64_t count_ = 0;
};

/// Writes values in the dataset format and returns the opened handle.
DatasetHandle write_dataset(const std::filesystem::path& dst, std::span<const double> values);

struct IoCounters {
  std::uint64_t records_read = 0;  ///< records handed back to the caller
  std::uint64_t bytes_read = 0;    ///< bytes pulled from the file, gaps included
  std::uint64_t read_calls = 0;    ///< one per coalesced window
};

/// Random-access reader that counts what it touches. Each reader owns its
/// own file cursor; share the handle, not the reader.
class DatasetReader {
 public:
  explicit DatasetReader(const DatasetHandle& h);

  /// Values of the given strictly increasing indices. Records whose spans
  /// fit in one 4 KiB window are fetched with a single read.
  std::vector<double> fetch(std::span<const std::uint64_t> sorted_indices);
  std::vector<double> fetch(std::span<const IndexCount> occupied);
  double at(std::uint64_t index);

  const IoCounters& counters() const noexcept { return io_; }

 private:
  std::uint64_t count_;
  std::ifstream in_;
  IoCounters io_;
};

struct CsvOptions {
  bool header = false;
  char delimiter = ',';
  /// 0-based position or a header name (requires header = true).
  std::variant<std::size_t, std::string> column = std::size_t{0};
};

/// Reads one numeric column. Blank lines are skipped. Throws ParseError
/// (with the 1-based line number and offending text), NonFiniteValue or
/// BadParams for an unknown column name.
std::vector<double> read_csv_column(std::istream& in, const CsvOptions& opts);
std::vector<double> read_csv_column(const std::filesystem::path& src, const CsvOptions& opts);

DatasetHandle ingest_csv(const std::filesystem::path& src, const CsvOptions& opts,
                         const std::filesystem::path& dst);

/// Sparse multinomial draw: occupied cells in ascending index order.
struct IndexSample {
  std::uint64_t n = 0;
  std::uint64_t m = 0;
  std::vector<IndexCount> pairs;
};

/// Same index stream as draw_weights, aggregated without an n-length buffer.
IndexSample draw_index_sample(std::uint64_t n, std::uint64_t m, CounterRng& rng);

/// n (1 - (1 - 1/n)^m), the expected number of occupied cells.
double expected_distinct(std::uint64_t n, std::uint64_t m);

struct SubsampleReport {
  std::uint64_t n = 0;
  std::uint64_t m = 0;
  std::string policy;
  std::uint64_t distinct = 0;
  IoCounters io;
  double rate_d = 0.0;  ///< max(m/n^2, 1/m, n/m^2)
  std::optional<double> dkw_eps;
  std::optional<double> dkw;  ///< min(1, 2 exp(-2 n eps^2)) when dkw_eps is set
};

struct BigdataResult {
  ConfidenceInterval ci;
  SubsampleReport report;
};

/// Interval for the sample mean (and mu) reading only the records with
/// w_i > 0. Throws DatasetTooSmall for fewer than 16 records and ZeroScale
/// when every fetched value is equal.
BigdataResult bigdata_ci_mean(const DatasetHandle& h, double alpha, const SizingPolicy& policy,
                              CounterRng& rng, Sidedness sided = Sidedness::TwoSided);

/// Interval for F_n(x) (and F(x)) from the same sparse subsample.
BigdataResult bigdata_ci_edf(const DatasetHandle& h, double x, double alpha, const SizingPolicy& policy,
                             CounterRng& rng, Sidedness sided = Sidedness::TwoSided,
                             std::optional<double> dkw_eps = std::nullopt);

}  // namespace randpivot

#endif  // RANDPIVOT_BIGDATA_HPP
