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

// Delay-cost objective. A request for file i from cell r is served by the
// cheapest source visible under the architecture mode:
//
//   local edge r      0
//   cloud             d_r
//   neighbor edge k   d_r + d_k
//   origin (CDN)      d_0
//
// The expected delay of a user in cell r is sum_i p_i * latency(r, i) and the
// network objective weights each cell by its user count. The delay saving
// relative to empty caches is monotone submodular in the set of
// (file, cache) assignments, which is what the greedy placement relies on.

#ifndef CHC_OBJECTIVE_HPP_
#define CHC_OBJECTIVE_HPP_

#include <optional>
#include <string_view>
#include <vector>

#include "chc/model.hpp"

namespace chc {

enum class ArchitectureMode {
  kChc,        // local + cloud + neighbor edges
  kNonCoop,    // local + cloud
  kEdgeOnly,   // local only
  kCloudOnly,  // cloud only
};

std::string_view to_string(ArchitectureMode mode);
// Accepts chc | noncoop | edgeonly | cloudonly.
ArchitectureMode parse_mode(std::string_view text);

// True if files placed in `cache` can ever serve a request under `mode`.
bool is_placement_target(ArchitectureMode mode, CacheId cache);

// Latency for a request in `cell` to be served from `source`, or nullopt if
// that source is not visible from `cell` under `mode`. Origin is always
// visible.
std::optional<Millis> access_latency(CacheId source, CellIndex cell,
                                     const CostModel& cost,
                                     ArchitectureMode mode);

struct ServingDecision {
  CacheId source = CacheId::origin();
  Millis latency = 0;
  bool local_hit = false;

  bool operator==(const ServingDecision&) const = default;
};

// Cheapest visible holder of `file`. Preference on equal latency is
// local, cloud, neighbors by ascending cell, then origin.
ServingDecision serving_cost(const CachePlacement& placement, CellIndex cell,
                             FileIndex file, const CostModel& cost,
                             ArchitectureMode mode);

Millis expected_cell_delay(const CachePlacement& placement, CellIndex cell,
                           const Catalog& catalog, const CostModel& cost,
                           ArchitectureMode mode);

// Sum over cells of users_per_cell[r] * expected_cell_delay(r). Units are
// milliseconds * users.
double total_expected_delay(const CachePlacement& placement,
                            const Topology& topology, const Catalog& catalog,
                            const CostModel& cost, ArchitectureMode mode);

// total_expected_delay(empty) - total_expected_delay(placement), accumulated
// as a sum of nonnegative per-request savings.
double delay_saving(const CachePlacement& placement, const Topology& topology,
                    const Catalog& catalog, const CostModel& cost,
                    ArchitectureMode mode);

inline double total_expected_delay(const CachePlacement& placement,
                                   const Model& model, ArchitectureMode mode) {
  return total_expected_delay(placement, model.topology, model.catalog,
                              model.cost, mode);
}
inline double delay_saving(const CachePlacement& placement, const Model& model,
                           ArchitectureMode mode) {
  return delay_saving(placement, model.topology, model.catalog, model.cost,
                      mode);
}

// Users-weighted delay of one file, not scaled by its popularity:
// sum_r users_per_cell[r] * latency(r, file). The objective is separable per
// file, so any change to a single file's holders moves the total by
// p_file * delta(file_user_delay).
double file_user_delay(const CachePlacement& placement, FileIndex file,
                       const Topology& topology, const CostModel& cost,
                       ArchitectureMode mode);

// delay_saving(placement + {(file, cache)}) - delay_saving(placement),
// evaluated only over the cells whose best source changes. Throws
// kCapacityExceeded if the file does not fit in the cache's free space, and
// kInvalidArgument if `cache` is the origin.
double marginal_gain(const CachePlacement& placement, FileIndex file,
                     CacheId cache, const Model& model, ArchitectureMode mode);

// Incremental marginal-gain oracle for greedy placement. Keeps the current
// best-source latency for every (cell, file) pair and updates it on commit.
// Gains are monotone nonincreasing under commits, bit-for-bit, because each
// term is max(0, best - via) with best only decreasing.
class GainEvaluator {
 public:
  GainEvaluator(const Model& model, ArchitectureMode mode);
  GainEvaluator(const Model& model, ArchitectureMode mode,
                const CachePlacement& start);

  // Capacity is not checked here.
  double gain(FileIndex file, CacheId cache) const;
  void commit(FileIndex file, CacheId cache);

  Millis best_latency(CellIndex cell, FileIndex file) const {
    return best_[static_cast<std::size_t>(cell) * num_files_ + file];
  }

 private:
  const Model& model_;
  ArchitectureMode mode_;
  FileIndex num_files_;
  std::vector<Millis> best_;  // cell-major
  std::vector<double> users_;
};

}  // namespace chc

#endif  // CHC_OBJECTIVE_HPP_
