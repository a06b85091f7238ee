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

#include "randpivot/bigdata.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <sstream>

#include "randpivot/bounds.hpp"
#include "randpivot/edf.hpp"
#include "randpivot/error.hpp"
#include "randpivot/pivots.hpp"

namespace randpivot {

namespace {

template <typename U>
void put_le(char* out, U v) {
  for (std::size_t i = 0; i < sizeof(U); ++i) out[i] = static_cast<char>((v >> (8 * i)) & 0xFFu);
}

template <typename U>
U get_le(const char* in) {
  U v = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) v |= static_cast<U>(static_cast<unsigned char>(in[i])) << (8 * i);
  return v;
}

std::string_view trim(std::string_view s) {
  const auto not_space = [](char c) { return c != ' ' && c != '\t' && c != '\r' && c != '\n'; };
  while (!s.empty() && !not_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && !not_space(s.back())) s.remove_suffix(1);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

std::vector<std::string_view> split(std::string_view line, char delim) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(delim, start);
    if (pos == std::string_view::npos) {
      out.push_back(trim(line.substr(start)));
      return out;
    }
    out.push_back(trim(line.substr(start, pos - start)));
    start = pos + 1;
  }
}

void check_size(const DatasetHandle& h) {
  if (h.count() < kMinDatasetCount) {
    throw Error(ErrorCode::DatasetTooSmall,
                "dataset has " + std::to_string(h.count()) + " records; at least 16 are required");
  }
}

SubsampleReport base_report(const DatasetHandle& h, std::uint64_t m, const SizingPolicy& policy,
                            const IndexSample& s, const IoCounters& io) {
  SubsampleReport r;
  r.n = h.count();
  r.m = m;
  r.policy = to_string(policy);
  r.distinct = s.pairs.size();
  r.io = io;
  r.rate_d = rate(r.n, m, RateKind::D);
  return r;
}

}  // namespace

DatasetHandle DatasetHandle::open(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "'");
  char hdr[kHeaderBytes];
  if (!in.read(hdr, kHeaderBytes)) throw Error(ErrorCode::BadFormat, "'" + path.string() + "' is shorter than the header");
  if (std::memcmp(hdr, kDatasetMagic, 4) != 0) throw Error(ErrorCode::BadFormat, "bad magic in '" + path.string() + "'");
  const auto version = get_le<std::uint32_t>(hdr + 4);
  if (version != kDatasetVersion) {
    throw Error(ErrorCode::BadFormat, "unsupported dataset version " + std::to_string(version));
  }
  const auto count = get_le<std::uint64_t>(hdr + 8);
  std::error_code ec;
  const auto size = std::filesystem::file_size(path, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot stat '" + path.string() + "'");
  if (count > (UINT64_MAX - kHeaderBytes) / kRecordBytes || size != kHeaderBytes + kRecordBytes * count) {
    throw Error(ErrorCode::BadFormat, "file size does not match record count " + std::to_string(count));
  }
  return DatasetHandle(path, count);
}

DatasetHandle write_dataset(const std::filesystem::path& dst, std::span<const double> values) {
  std::ofstream out(dst, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot create '" + dst.string() + "'");
  char hdr[kHeaderBytes];
  std::memcpy(hdr, kDatasetMagic, 4);
  put_le<std::uint32_t>(hdr + 4, kDatasetVersion);
  put_le<std::uint64_t>(hdr + 8, values.size());
  out.write(hdr, kHeaderBytes);
  std::vector<char> buf;
  buf.reserve(kRecordBytes * std::min<std::size_t>(values.size(), 1 << 16));
  auto flush = [&] {
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    buf.clear();
  };
  for (double v : values) {
    char rec[kRecordBytes];
    put_le<std::uint64_t>(rec, std::bit_cast<std::uint64_t>(v));
    buf.insert(buf.end(), rec, rec + kRecordBytes);
    if (buf.size() >= (kRecordBytes << 16)) flush();
  }
  flush();
  out.close();
  if (!out) throw Error(ErrorCode::IoError, "write to '" + dst.string() + "' failed");
  return DatasetHandle::open(dst);
}

DatasetReader::DatasetReader(const DatasetHandle& h) : count_(h.count()), in_(h.path(), std::ios::binary) {
  if (!in_) throw Error(ErrorCode::IoError, "cannot open '" + h.path().string() + "'");
}

std::vector<double> DatasetReader::fetch(std::span<const std::uint64_t> idx) {
  std::vector<double> out;
  out.reserve(idx.size());
  std::vector<char> buf;
  std::size_t i = 0;
  while (i < idx.size()) {
    if (idx[i] >= count_) throw Error(ErrorCode::BadParams, "record index out of range");
    if (i > 0 && idx[i] <= idx[i - 1]) throw Error(ErrorCode::BadParams, "indices must be strictly increasing");
    const std::uint64_t first = idx[i];
    std::size_t j = i + 1;
    while (j < idx.size() && idx[j] > idx[j - 1] && idx[j] < count_ &&
           (idx[j] - first + 1) * kRecordBytes <= kCoalesceWindow) {
      ++j;
    }
    const std::uint64_t span_bytes = (idx[j - 1] - first + 1) * kRecordBytes;
    buf.resize(span_bytes);
    in_.seekg(static_cast<std::streamoff>(kHeaderBytes + first * kRecordBytes));
    if (!in_.read(buf.data(), static_cast<std::streamsize>(span_bytes))) {
      throw Error(ErrorCode::IoError, "short read from dataset");
    }
    ++io_.read_calls;
    io_.bytes_read += span_bytes;
    for (std::size_t k = i; k < j; ++k) {
      const char* rec = buf.data() + (idx[k] - first) * kRecordBytes;
      out.push_back(std::bit_cast<double>(get_le<std::uint64_t>(rec)));
    }
    io_.records_read += j - i;
    i = j;
  }
  return out;
}

std::vector<double> DatasetReader::fetch(std::span<const IndexCount> occupied) {
  std::vector<std::uint64_t> idx;
  idx.reserve(occupied.size());
  for (const IndexCount& c : occupied) idx.push_back(c.index);
  return fetch(std::span<const std::uint64_t>(idx));
}

double DatasetReader::at(std::uint64_t index) {
  const std::uint64_t one[1] = {index};
  return fetch(std::span<const std::uint64_t>(one))[0];
}

std::vector<double> read_csv_column(std::istream& in, const CsvOptions& opts) {
  std::vector<double> values;
  std::string line;
  std::size_t lineno = 0;
  std::size_t col = 0;
  bool have_col = false;
  if (const auto* pos = std::get_if<std::size_t>(&opts.column)) {
    col = *pos;
    have_col = true;
  } else if (!opts.header) {
    throw Error(ErrorCode::BadParams, "a column name needs a header row");
  }
  bool header_pending = opts.header;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto fields = split(line, opts.delimiter);
    if (header_pending) {
      header_pending = false;
      if (!have_col) {
        const std::string& name = std::get<std::string>(opts.column);
        const auto it = std::find(fields.begin(), fields.end(), std::string_view(name));
        if (it == fields.end()) throw Error(ErrorCode::BadParams, "no column named '" + name + "'");
        col = static_cast<std::size_t>(it - fields.begin());
        have_col = true;
      }
      continue;
    }
    if (col >= fields.size()) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": missing column " + std::to_string(col));
    }
    const std::string_view f = fields[col];
    double v = 0.0;
    const char* b = f.data();
    const char* e = f.data() + f.size();
    if (!f.empty() && *b == '+') ++b;
    const auto [p, ec] = std::from_chars(b, e, v);
    if (f.empty() || ec != std::errc{} || p != e) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": cannot parse '" + std::string(f) + "'");
    }
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::NonFiniteValue, "line " + std::to_string(lineno) + ": non-finite value '" + std::string(f) + "'");
    }
    values.push_back(v);
  }
  if (in.bad()) throw Error(ErrorCode::IoError, "read error");
  return values;
}

std::vector<double> read_csv_column(const std::filesystem::path& src, const CsvOptions& opts) {
  std::ifstream in(src);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + src.string() + "'");
  return read_csv_column(in, opts);
}

DatasetHandle ingest_csv(const std::filesystem::path& src, const CsvOptions& opts,
                         const std::filesystem::path& dst) {
  const std::vector<double> v = read_csv_column(src, opts);
  return write_dataset(dst, v);
}

IndexSample draw_index_sample(std::uint64_t n, std::uint64_t m, CounterRng& rng) {
  if (n == 0 || m == 0) throw Error(ErrorCode::BadParams, "index sample needs n, m >= 1");
  std::vector<std::uint64_t> idx;
  idx.reserve(m);
  draw_indices(n, m, rng, [&](std::uint64_t i) { idx.push_back(i); });
  std::sort(idx.begin(), idx.end());
  IndexSample s;
  s.n = n;
  s.m = m;
  for (std::uint64_t i : idx) {
    if (!s.pairs.empty() && s.pairs.back().index == i) {
      ++s.pairs.back().count;
    } else {
      s.pairs.push_back({i, 1});
    }
  }
  return s;
}

double expected_distinct(std::uint64_t n, std::uint64_t m) {
  const double nd = static_cast<double>(n);
  return -nd * std::expm1(static_cast<double>(m) * std::log1p(-1.0 / nd));
}

BigdataResult bigdata_ci_mean(const DatasetHandle& h, double alpha, const SizingPolicy& policy,
                              CounterRng& rng, Sidedness sided) {
  check_size(h);
  const std::uint64_t m = subsample_size(h.count(), policy);
  const IndexSample s = draw_index_sample(h.count(), m, rng);
  DatasetReader reader(h);
  const std::vector<double> vals = reader.fetch(std::span<const IndexCount>(s.pairs));
  const SubsampleStats ss = subsample_stats(s.pairs, vals);
  const WeightStats ws = weight_stats(h.count(), m, s.pairs);
  BigdataResult r{ci_xbar(ss, ws, alpha, sided), base_report(h, m, policy, s, reader.counters())};
  return r;
}

BigdataResult bigdata_ci_edf(const DatasetHandle& h, double x, double alpha, const SizingPolicy& policy,
                             CounterRng& rng, Sidedness sided, std::optional<double> dkw_eps) {
  check_size(h);
  const std::uint64_t m = subsample_size(h.count(), policy);
  const IndexSample s = draw_index_sample(h.count(), m, rng);
  DatasetReader reader(h);
  const std::vector<double> vals = reader.fetch(std::span<const IndexCount>(s.pairs));
  const double f_mn = randomized_edf(s.pairs, vals, x);
  const WeightStats ws = weight_stats(h.count(), m, s.pairs);
  BigdataResult r{ci_edf(f_mn, ws, alpha, sided), base_report(h, m, policy, s, reader.counters())};
  if (dkw_eps) {
    r.report.dkw_eps = dkw_eps;
    r.report.dkw = dkw_bound(h.count(), *dkw_eps);
  }
  return r;
}

}  // namespace randpivot
