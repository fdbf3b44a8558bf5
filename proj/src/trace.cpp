/*
 * Copyright 2026 The CHC Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "chc/trace.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "chc/error.hpp"
#include "text_util.hpp"

namespace chc {

namespace {

constexpr std::string_view kHeader = "seq,cell,file,user";

double unit_double(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

RequestTrace parse_trace(std::string_view input, std::uint32_t num_cells,
                         std::optional<FileIndex> num_files) {
  RequestTrace trace;
  bool saw_header = false;
  text::for_each_line(input, [&](std::size_t line_no, std::string_view line) {
    const auto where = " at line " + std::to_string(line_no);
    if (line_no == 1) {
      if (line != kHeader) {
        throw Error(ErrorCode::kParse, "trace: expected header '" +
                                           std::string(kHeader) + "'" + where);
      }
      saw_header = true;
      return;
    }
    if (line.empty()) return;
    const auto fields = text::split(line, ',');
    if (fields.size() != 4) {
      throw Error(ErrorCode::kParse, "trace: expected 4 fields" + where);
    }
    const auto seq = text::parse_u64(fields[0]);
    const auto cell = text::parse_u64(fields[1]);
    const auto file = text::parse_u64(fields[2]);
    if (!seq) throw Error(ErrorCode::kParse, "trace: malformed seq" + where);
    if (!cell) throw Error(ErrorCode::kParse, "trace: malformed cell" + where);
    if (!file) throw Error(ErrorCode::kParse, "trace: malformed file" + where);
    if (*cell == 0 || *cell > num_cells) {
      throw Error(ErrorCode::kParse, "cell out of range" + where);
    }
    const std::uint64_t max_file = num_files ? *num_files : UINT32_MAX;
    if (*file == 0 || *file > max_file) {
      throw Error(ErrorCode::kParse, "file out of range" + where);
    }
    if (!trace.empty() && *seq <= trace.back().seq) {
      throw Error(ErrorCode::kParse, "seq not strictly increasing" + where);
    }
    trace.push_back({*seq, static_cast<CellIndex>(*cell - 1),
                     static_cast<FileIndex>(*file - 1), std::string(fields[3])});
  });
  if (!saw_header) throw Error(ErrorCode::kParse, "trace: missing header");
  return trace;
}

RequestTrace load_trace(const std::string& path, std::uint32_t num_cells,
                        std::optional<FileIndex> num_files) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open trace '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_trace(buf.str(), num_cells, num_files);
}

std::string write_trace(const RequestTrace& trace) {
  std::string out(kHeader);
  out += '\n';
  for (const auto& r : trace) {
    out += std::to_string(r.seq);
    out += ',';
    out += std::to_string(r.cell + 1);
    out += ',';
    out += std::to_string(r.file + 1);
    out += ',';
    out += r.user;
    out += '\n';
  }
  return out;
}

void save_trace(const std::string& path, const RequestTrace& trace) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write trace '" + path + "'");
  const auto text = write_trace(trace);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error(ErrorCode::kIo, "short write to '" + path + "'");
}

FileIndex inferred_num_files(std::span<const Request> trace) {
  FileIndex n = 0;
  for (const auto& r : trace) n = std::max(n, r.file + 1);
  return n;
}

std::vector<double> zipf_popularity(FileIndex num_files, double exponent) {
  if (!(exponent >= 0) || !std::isfinite(exponent)) {
    throw Error(ErrorCode::kInvalidArgument, "zipf exponent must be >= 0");
  }
  std::vector<double> p(num_files);
  double total = 0;
  for (FileIndex i = 0; i < num_files; ++i) {
    p[i] = std::pow(static_cast<double>(i + 1), -exponent);
    total += p[i];
  }
  for (auto& v : p) v /= total;
  return p;
}

RequestTrace generate_zipf_trace(std::uint64_t num_requests, FileIndex num_files,
                                 double exponent, const Topology& topology,
                                 std::uint64_t seed) {
  if (num_files == 0) {
    throw Error(ErrorCode::kInvalidArgument, "zipf trace needs at least one file");
  }
  if (topology.num_cells == 0) {
    throw Error(ErrorCode::kInvalidArgument, "zipf trace needs at least one cell");
  }
  if (!(exponent >= 0) || !std::isfinite(exponent)) {
    throw Error(ErrorCode::kInvalidArgument, "zipf exponent must be >= 0");
  }
  std::vector<double> cumulative(num_files);
  double acc = 0;
  for (FileIndex i = 0; i < num_files; ++i) {
    acc += std::pow(static_cast<double>(i + 1), -exponent);
    cumulative[i] = acc;
  }
  const auto R = topology.num_cells;
  std::mt19937_64 rng(seed);
  RequestTrace trace;
  trace.reserve(num_requests);
  for (std::uint64_t n = 0; n < num_requests; ++n) {
    const double target = unit_double(rng) * acc;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), target);
    const auto file = static_cast<FileIndex>(
        std::min<std::ptrdiff_t>(it - cumulative.begin(), num_files - 1));
    const auto cell = static_cast<CellIndex>(
        std::min<std::uint64_t>(static_cast<std::uint64_t>(unit_double(rng) * R), R - 1));
    const std::uint64_t users =
        cell < topology.users_per_cell.size() ? topology.users_per_cell[cell] : 0;
    std::string user;
    if (users > 0) {
      const auto j = std::min<std::uint64_t>(
          static_cast<std::uint64_t>(unit_double(rng) * static_cast<double>(users)),
          users - 1);
      user = "u" + std::to_string(cell + j * R + 1);
    }
    trace.push_back({n + 1, cell, file, std::move(user)});
  }
  return trace;
}

std::vector<double> estimate_popularity(std::span<const Request> trace,
                                        FileIndex num_files) {
  if (trace.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "cannot estimate popularity from an empty trace");
  }
  std::vector<std::uint64_t> counts(num_files, 0);
  for (const auto& r : trace) {
    if (r.file >= num_files) {
      throw Error(ErrorCode::kInvalidArgument,
                  "request seq " + std::to_string(r.seq) + " references file " +
                      std::to_string(r.file + 1) + " outside the catalog");
    }
    ++counts[r.file];
  }
  std::vector<double> p(num_files);
  const auto total = static_cast<double>(trace.size());
  for (FileIndex i = 0; i < num_files; ++i) {
    p[i] = static_cast<double>(counts[i]) / total;
  }
  return p;
}

TraceSplit split_trace(const RequestTrace& trace, double fraction) {
  if (!(fraction >= 0 && fraction < 1)) {
    throw Error(ErrorCode::kInvalidArgument, "split fraction must be in [0, 1)");
  }
  std::span<const Request> all(trace);
  if (fraction == 0) return {all, all};
  const auto cut = static_cast<std::size_t>(
      std::floor(fraction * static_cast<double>(trace.size())));
  return {all.first(cut), all.subspan(cut)};
}

}  // namespace chc
