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

#include "chc/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "chc/error.hpp"
#include "text_util.hpp"

namespace chc {

namespace {
constexpr double kPopularityTolerance = 1e-9;
}  // namespace

std::uint64_t Topology::total_users() const {
  return std::accumulate(users_per_cell.begin(), users_per_cell.end(),
                         std::uint64_t{0});
}

Bytes Topology::total_capacity() const {
  return std::accumulate(edge_capacity.begin(), edge_capacity.end(),
                         cloud_capacity);
}

std::vector<std::uint64_t> round_robin_users(std::uint64_t users,
                                             std::uint32_t cells) {
  std::vector<std::uint64_t> out(cells, 0);
  if (cells == 0) return out;
  for (std::uint32_t r = 0; r < cells; ++r) {
    out[r] = users / cells + (r < users % cells ? 1 : 0);
  }
  return out;
}

bool Catalog::uniform_size() const {
  return std::adjacent_find(file_size.begin(), file_size.end(),
                            std::not_equal_to<>()) == file_size.end();
}

Catalog Catalog::uniform(std::vector<double> popularity, Bytes size) {
  Catalog c;
  c.file_size.assign(popularity.size(), size);
  c.popularity = std::move(popularity);
  return c;
}

std::string write_catalog_csv(const Catalog& catalog) {
  std::string out = "file,size_bytes,popularity\n";
  for (FileIndex i = 0; i < catalog.num_files(); ++i) {
    out += std::to_string(i + 1);
    out += ',';
    out += std::to_string(catalog.file_size[i]);
    out += ',';
    out += text::format_double(catalog.popularity[i]);
    out += '\n';
  }
  return out;
}

Catalog read_catalog_csv(std::string_view input) {
  Catalog catalog;
  text::for_each_line(input, [&](std::size_t line_no, std::string_view line) {
    if (line_no == 1) {
      if (line != "file,size_bytes,popularity") {
        throw Error(ErrorCode::kParse, "catalog: bad header at line 1");
      }
      return;
    }
    if (line.empty()) return;
    const auto fields = text::split(line, ',');
    const auto where = " at line " + std::to_string(line_no);
    if (fields.size() != 3) {
      throw Error(ErrorCode::kParse, "catalog: expected 3 fields" + where);
    }
    const auto id = text::parse_u64(fields[0]);
    const auto size = text::parse_u64(fields[1]);
    const auto pop = text::parse_double(fields[2]);
    if (!id || !size || !pop) {
      throw Error(ErrorCode::kParse, "catalog: malformed field" + where);
    }
    if (*id != catalog.file_size.size() + 1) {
      throw Error(ErrorCode::kParse, "catalog: file ids must be 1..F in order" + where);
    }
    catalog.file_size.push_back(*size);
    catalog.popularity.push_back(*pop);
  });
  return catalog;
}

std::string ValidationReport::to_string() const {
  if (ok()) return "valid";
  std::string out;
  for (const auto& e : errors) {
    if (!out.empty()) out += "; ";
    out += e;
  }
  return out;
}

ValidationReport validate_topology(const Topology& topology,
                                   const CostModel& cost,
                                   const Catalog& catalog) {
  ValidationReport report;
  auto fail = [&](std::string msg) { report.errors.push_back(std::move(msg)); };
  const auto R = topology.num_cells;

  if (R == 0) fail("num_cells must be at least 1");
  if (topology.edge_capacity.size() != R) {
    fail("dimension mismatch: edge_capacity has " +
         std::to_string(topology.edge_capacity.size()) + " entries, expected " +
         std::to_string(R));
  }
  if (topology.users_per_cell.size() != R) {
    fail("dimension mismatch: users_per_cell has " +
         std::to_string(topology.users_per_cell.size()) +
         " entries, expected " + std::to_string(R));
  }
  if (cost.fronthaul.size() != R) {
    fail("dimension mismatch: cost vector has " +
         std::to_string(cost.fronthaul.size()) + " entries, expected " +
         std::to_string(R));
  }
  for (std::size_t r = 0; r < cost.fronthaul.size(); ++r) {
    if (!(cost.fronthaul[r] >= 0) || !std::isfinite(cost.fronthaul[r])) {
      fail("fronthaul latency of cell " + std::to_string(r + 1) +
           " must be finite and nonnegative");
    }
  }
  if (!std::isfinite(cost.origin)) fail("origin latency must be finite");
  if (!cost.fronthaul.empty()) {
    const auto max_d = *std::max_element(cost.fronthaul.begin(), cost.fronthaul.end());
    if (!(cost.origin > max_d)) {
      fail("origin not dominant: d_origin=" + text::format_double(cost.origin) +
           " <= max fronthaul " + text::format_double(max_d));
    }
  }

  const auto F = catalog.file_size.size();
  if (F == 0) fail("catalog must contain at least one file");
  if (catalog.popularity.size() != F) {
    fail("dimension mismatch: popularity has " +
         std::to_string(catalog.popularity.size()) + " entries, expected " +
         std::to_string(F));
  }
  for (std::size_t i = 0; i < F; ++i) {
    if (catalog.file_size[i] == 0) {
      fail("file " + std::to_string(i + 1) + " has zero size");
      break;
    }
  }
  double sum = 0;
  bool negative = false;
  for (double p : catalog.popularity) {
    if (!(p >= 0) || !std::isfinite(p)) negative = true;
    sum += p;
  }
  if (negative) fail("popularity entries must be finite and nonnegative");
  if (!catalog.popularity.empty() && !(std::abs(sum - 1.0) <= kPopularityTolerance)) {
    fail("popularity not normalized: sum=" + text::format_double(sum));
  }
  return report;
}

void require_valid(const Model& model) {
  const auto report = validate_model(model);
  if (!report.ok()) throw Error(ErrorCode::kValidation, report.to_string());
}

std::uint32_t CacheId::slot() const {
  switch (tier_) {
    case Tier::kCloud:
      return 0;
    case Tier::kEdge:
      return cell_ + 1;
    case Tier::kOrigin:
      break;
  }
  throw Error(ErrorCode::kInvalidArgument, "origin is not a cache slot");
}

std::string CacheId::to_string() const {
  switch (tier_) {
    case Tier::kCloud:
      return "cloud";
    case Tier::kEdge:
      return "edge" + std::to_string(cell_ + 1);
    case Tier::kOrigin:
      return "origin";
  }
  return "?";
}

CacheId CacheId::parse(std::string_view text) {
  if (text == "cloud") return cloud();
  if (text == "origin") return origin();
  if (text.substr(0, 4) == "edge") {
    const auto n = text::parse_u64(text.substr(4));
    if (n && *n >= 1 && *n <= UINT32_MAX) {
      return edge(static_cast<CellIndex>(*n - 1));
    }
  }
  throw Error(ErrorCode::kParse, "bad cache id '" + std::string(text) + "'");
}

CachePlacement::CachePlacement(const Topology& topology, const Catalog& catalog)
    : num_files_(catalog.num_files()),
      sizes_(std::make_shared<const std::vector<Bytes>>(catalog.file_size)) {
  if (topology.edge_capacity.size() != topology.num_cells) {
    throw Error(ErrorCode::kInvalidArgument,
                "placement: edge_capacity size does not match num_cells");
  }
  capacity_.reserve(topology.num_cells + 1);
  capacity_.push_back(topology.cloud_capacity);
  capacity_.insert(capacity_.end(), topology.edge_capacity.begin(),
                   topology.edge_capacity.end());
  used_.assign(capacity_.size(), 0);
  count_.assign(capacity_.size(), 0);
  member_.assign(capacity_.size() * num_files_, 0);
}

std::uint32_t CachePlacement::slot_of(CacheId cache) const {
  if (cache.is_origin()) {
    throw Error(ErrorCode::kInvalidArgument, "origin is not a placement target");
  }
  const auto s = cache.slot();
  if (s >= capacity_.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "cache " + cache.to_string() + " out of range");
  }
  return s;
}

void CachePlacement::insert(CacheId cache, FileIndex file) {
  const auto s = slot_of(cache);
  if (file >= num_files_) {
    throw Error(ErrorCode::kInvalidArgument, "file index out of range");
  }
  if (member_[index(s, file)]) {
    throw Error(ErrorCode::kInvalidArgument,
                "file " + std::to_string(file + 1) + " already in " + cache.to_string());
  }
  const auto size = (*sizes_)[file];
  if (size > capacity_[s] - used_[s]) {
    throw Error(ErrorCode::kCapacityExceeded,
                "file " + std::to_string(file + 1) + " does not fit in " +
                    cache.to_string());
  }
  member_[index(s, file)] = 1;
  used_[s] += size;
  ++count_[s];
}

void CachePlacement::erase(CacheId cache, FileIndex file) {
  const auto s = slot_of(cache);
  if (file >= num_files_ || !member_[index(s, file)]) {
    throw Error(ErrorCode::kInvalidArgument,
                "file " + std::to_string(file + 1) + " not in " + cache.to_string());
  }
  member_[index(s, file)] = 0;
  used_[s] -= (*sizes_)[file];
  --count_[s];
}

std::vector<FileIndex> CachePlacement::files(CacheId cache) const {
  const auto s = slot_of(cache);
  std::vector<FileIndex> out;
  out.reserve(count_[s]);
  for (FileIndex i = 0; i < num_files_; ++i) {
    if (member_[index(s, i)]) out.push_back(i);
  }
  return out;
}

bool CachePlacement::operator==(const CachePlacement& other) const {
  return num_files_ == other.num_files_ && capacity_ == other.capacity_ &&
         used_ == other.used_ && member_ == other.member_;
}

}  // namespace chc
