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

// Offline cache placement: proactive greedy distribution, an exhaustive
// oracle for small instances, and the comparison baselines.

#ifndef CHC_PLACEMENT_HPP_
#define CHC_PLACEMENT_HPP_

#include <cstdint>
#include <string>
#include <string_view>

#include "chc/model.hpp"
#include "chc/objective.hpp"

namespace chc {

enum class PlacementAlgorithm {
  kPcd,      // greedy delay-saving maximization
  kMpcEx,    // most popular per cache, cloud excludes edge-resident files
  kFemtoX,   // greedy over cooperative edge caches only
  kPopular,  // most popular per cache, no exclusion
};

std::string_view to_string(PlacementAlgorithm algorithm);
// Accepts pcd | mpcex | femtox | popular.
PlacementAlgorithm parse_placement_algorithm(std::string_view text);

struct GreedyOptions {
  // Lazy evaluation keeps a max-heap of stale gains; output is identical to
  // the naive scan.
  bool lazy = true;
};

// Starts from empty caches and repeatedly commits the feasible (file, cache)
// pair with the highest marginal gain until no pair has positive gain. With
// non-uniform file sizes candidates are ranked by gain per byte. Ties break
// on the lowest (file, cache slot).
CachePlacement pcd_greedy(const Model& model, ArchitectureMode mode,
                          GreedyOptions options = {});

struct BruteForceLimits {
  // Upper bound on the number of complete placements enumerated.
  std::uint64_t max_placements = 25'000'000;
  FileIndex max_files = 16;
};

// Exhaustive optimum of delay_saving over capacity-feasible placements.
// Throws kInstanceTooLarge if the instance exceeds `limits`.
CachePlacement brute_force_optimal(const Model& model, ArchitectureMode mode,
                                   BruteForceLimits limits = {});

// Capacity plans. All of them preserve the topology's total capacity in bytes.
//
// Hierarchical split: cloud = cloud_ratio * each edge.
Topology split_total_capacity(const Topology& base, Bytes total,
                              double cloud_ratio);
Topology redistribute_to_edges(const Topology& topology);
Topology redistribute_to_cloud(const Topology& topology);
// Moves capacity onto the tiers the architecture can use: edges for
// edge-only, the cloud for cloud-only, unchanged otherwise.
Topology architecture_topology(const Topology& topology, ArchitectureMode mode);

// Greedy on the edge tier alone / cloud tier alone, after redistributing the
// model's total capacity there.
CachePlacement edge_only_placement(const Model& model);
CachePlacement cloud_only_placement(const Model& model);

// Each edge keeps its most popular files; the cloud keeps the most popular
// files not resident at any edge.
CachePlacement mpc_ex_placement(const Model& model);

// Femtocaching-style greedy over cooperative edge caches. The cloud share of
// the capacity is spread evenly over the edges.
CachePlacement femto_x_placement(const Model& model);

// Every placement-target cache independently keeps its most popular files.
CachePlacement most_popular_placement(const Model& model, ArchitectureMode mode);

// Dispatches on the algorithm, after applying architecture_topology to the
// model's capacities. Under edge-only and cloud-only the baselines reduce to
// a most-popular fill of the visible tier; under non-cooperative routing
// FemtoX runs its greedy without neighbor retrieval.
CachePlacement compute_placement(const Model& model, ArchitectureMode mode,
                                 PlacementAlgorithm algorithm);

// `cache_id<TAB>file_id` per line, sorted by (cloud, edge1..edgeR) then file
// id; ids are 1-based.
std::string write_placement(const CachePlacement& placement);
CachePlacement read_placement(std::string_view text, const Topology& topology,
                              const Catalog& catalog);

}  // namespace chc

#endif  // CHC_PLACEMENT_HPP_
