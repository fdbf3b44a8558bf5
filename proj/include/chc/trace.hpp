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

// Request traces: the canonical CSV format, synthetic Zipf workloads and
// empirical popularity estimation.
//
// Canonical format (UTF-8, LF, no quoting):
//
//   seq,cell,file,user
//   1,1,42,u7
//
// seq strictly increasing; cell in 1..R; file in 1..F; user may be empty.

#ifndef CHC_TRACE_HPP_
#define CHC_TRACE_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "chc/model.hpp"

namespace chc {

struct Request {
  std::uint64_t seq = 0;
  CellIndex cell = 0;  // 0-based
  FileIndex file = 0;  // 0-based
  std::string user;

  bool operator==(const Request&) const = default;
};

using RequestTrace = std::vector<Request>;

// Validates cells against `num_cells`. When `num_files` is empty the catalog
// is inferred and any positive file id is accepted. Errors carry the 1-based
// line number, counting the header as line 1.
RequestTrace parse_trace(std::string_view text, std::uint32_t num_cells,
                         std::optional<FileIndex> num_files = std::nullopt);
RequestTrace load_trace(const std::string& path, std::uint32_t num_cells,
                        std::optional<FileIndex> num_files = std::nullopt);
std::string write_trace(const RequestTrace& trace);
void save_trace(const std::string& path, const RequestTrace& trace);

// Largest file index + 1, i.e. the inferred catalog size.
FileIndex inferred_num_files(std::span<const Request> trace);

// p_i proportional to (i + 1)^-exponent, normalized.
std::vector<double> zipf_popularity(FileIndex num_files, double exponent);

// Files i.i.d. Zipf(exponent) over 1..F, cells uniform, users drawn from the
// cell's round-robin user block. The generator is std::mt19937_64 and every
// draw is converted to a double as (x >> 11) * 2^-53, so the output is
// identical for a given seed on any conforming implementation.
RequestTrace generate_zipf_trace(std::uint64_t num_requests, FileIndex num_files,
                                 double exponent, const Topology& topology,
                                 std::uint64_t seed);

// count(i) / total. Throws kInvalidArgument on an empty trace.
std::vector<double> estimate_popularity(std::span<const Request> trace,
                                        FileIndex num_files);

struct TraceSplit {
  std::span<const Request> estimation;
  std::span<const Request> replay;
};

// fraction == 0 uses the whole trace for both; otherwise the first
// floor(fraction * n) requests estimate popularity and the rest are replayed.
TraceSplit split_trace(const RequestTrace& trace, double fraction);

}  // namespace chc

#endif  // CHC_TRACE_HPP_
