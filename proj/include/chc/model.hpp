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

// Domain types shared by every module: topology, latency cost model, content
// catalog, cache identifiers and capacity-checked cache placements.
//
// Cells and files are 0-based internally. All text formats (traces,
// placements, catalogs) use 1-based ids.

#ifndef CHC_MODEL_HPP_
#define CHC_MODEL_HPP_

#include <compare>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace chc {

using Bytes = std::uint64_t;
using Millis = double;
using CellIndex = std::uint32_t;
using FileIndex = std::uint32_t;

inline constexpr Bytes kMegabyte = 1'000'000;
inline constexpr Bytes kGigabyte = 1'000'000'000;
inline constexpr Bytes kTerabyte = 1'000'000'000'000;

struct Topology {
  std::uint32_t num_cells = 0;
  std::vector<Bytes> edge_capacity;  // one per cell
  Bytes cloud_capacity = 0;
  std::vector<std::uint64_t> users_per_cell;

  std::uint64_t total_users() const;
  Bytes total_capacity() const;
};

// Assigns `users` to `cells` round-robin: cell r gets users u with u % cells == r.
std::vector<std::uint64_t> round_robin_users(std::uint64_t users,
                                             std::uint32_t cells);

struct CostModel {
  std::vector<Millis> fronthaul;  // BBU cloud <-> RRH r
  Millis origin = 0;              // CDN -> RRH

  // U-turn retrieval RRH k -> BBU -> RRH r. Symmetric in (r, k).
  Millis neighbor(CellIndex r, CellIndex k) const {
    return fronthaul[r] + fronthaul[k];
  }
};

struct Catalog {
  std::vector<Bytes> file_size;
  std::vector<double> popularity;

  FileIndex num_files() const {
    return static_cast<FileIndex>(file_size.size());
  }
  bool uniform_size() const;

  static Catalog uniform(std::vector<double> popularity, Bytes size);
};

// Catalog <-> CSV with header `file,size_bytes,popularity`. Popularities are
// written in shortest round-trip form, so read(write(c)) is bit-exact.
std::string write_catalog_csv(const Catalog& catalog);
Catalog read_catalog_csv(std::string_view text);

struct Model {
  Topology topology;
  CostModel cost;
  Catalog catalog;
};

struct ValidationReport {
  std::vector<std::string> errors;

  bool ok() const { return errors.empty(); }
  std::string to_string() const;
};

// Collects every violated invariant rather than stopping at the first.
ValidationReport validate_topology(const Topology& topology,
                                   const CostModel& cost,
                                   const Catalog& catalog);
inline ValidationReport validate_model(const Model& model) {
  return validate_topology(model.topology, model.cost, model.catalog);
}

// Throws Error(kValidation) listing all problems.
void require_valid(const Model& model);

class CacheId {
 public:
  enum class Tier : std::uint8_t { kCloud = 0, kEdge = 1, kOrigin = 2 };

  static constexpr CacheId cloud() { return CacheId(Tier::kCloud, 0); }
  static constexpr CacheId edge(CellIndex cell) {
    return CacheId(Tier::kEdge, cell);
  }
  static constexpr CacheId origin() { return CacheId(Tier::kOrigin, 0); }

  // Placement slot: 0 is the cloud, r + 1 is edge r. Origin has no slot.
  static CacheId from_slot(std::uint32_t slot) {
    return slot == 0 ? cloud() : edge(slot - 1);
  }

  constexpr Tier tier() const { return tier_; }
  constexpr CellIndex cell() const { return cell_; }
  constexpr bool is_cloud() const { return tier_ == Tier::kCloud; }
  constexpr bool is_edge() const { return tier_ == Tier::kEdge; }
  constexpr bool is_origin() const { return tier_ == Tier::kOrigin; }
  std::uint32_t slot() const;

  // "cloud", "edge<r>" (1-based) or "origin".
  std::string to_string() const;
  static CacheId parse(std::string_view text);

  constexpr auto operator<=>(const CacheId&) const = default;

 private:
  constexpr CacheId(Tier tier, CellIndex cell) : tier_(tier), cell_(cell) {}

  Tier tier_;
  CellIndex cell_;
};

// Contents of the cloud cache and the R edge caches. Every mutation is
// capacity-checked; a placement can never be observed over capacity.
class CachePlacement {
 public:
  CachePlacement() = default;
  CachePlacement(const Topology& topology, const Catalog& catalog);

  std::uint32_t num_cells() const {
    return static_cast<std::uint32_t>(capacity_.size()) - 1;
  }
  std::uint32_t num_slots() const {
    return static_cast<std::uint32_t>(capacity_.size());
  }
  FileIndex num_files() const { return num_files_; }

  Bytes capacity(CacheId cache) const { return capacity_[slot_of(cache)]; }
  Bytes used_bytes(CacheId cache) const { return used_[slot_of(cache)]; }
  Bytes free_bytes(CacheId cache) const {
    const auto s = slot_of(cache);
    return capacity_[s] - used_[s];
  }
  std::size_t file_count(CacheId cache) const { return count_[slot_of(cache)]; }
  Bytes file_size(FileIndex file) const { return (*sizes_)[file]; }

  bool contains(CacheId cache, FileIndex file) const {
    return member_[index(slot_of(cache), file)] != 0;
  }
  // Fast path for hot loops that already hold a slot number.
  bool contains_slot(std::uint32_t slot, FileIndex file) const {
    return member_[index(slot, file)] != 0;
  }
  bool fits(CacheId cache, FileIndex file) const {
    return (*sizes_)[file] <= free_bytes(cache);
  }

  // Throws kCapacityExceeded if the file does not fit and kInvalidArgument if
  // it is already present.
  void insert(CacheId cache, FileIndex file);
  // Throws kInvalidArgument if the file is not present.
  void erase(CacheId cache, FileIndex file);

  std::vector<FileIndex> files(CacheId cache) const;  // ascending

  bool operator==(const CachePlacement& other) const;

 private:
  std::uint32_t slot_of(CacheId cache) const;
  std::size_t index(std::uint32_t slot, FileIndex file) const {
    return static_cast<std::size_t>(slot) * num_files_ + file;
  }

  FileIndex num_files_ = 0;
  std::shared_ptr<const std::vector<Bytes>> sizes_;
  std::vector<Bytes> capacity_;
  std::vector<Bytes> used_;
  std::vector<std::size_t> count_;
  std::vector<std::uint8_t> member_;
};

}  // namespace chc

#endif  // CHC_MODEL_HPP_
