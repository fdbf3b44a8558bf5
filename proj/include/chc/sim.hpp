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

// Deterministic trace replay: route, record, let the policy react, repeat.

#ifndef CHC_SIM_HPP_
#define CHC_SIM_HPP_

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "chc/model.hpp"
#include "chc/objective.hpp"
#include "chc/replacement.hpp"
#include "chc/trace.hpp"

namespace chc {

struct Counters {
  std::uint64_t total_requests = 0;
  std::uint64_t hits_local = 0;
  std::uint64_t hits_cloud = 0;
  std::uint64_t hits_neighbor = 0;
  std::uint64_t misses = 0;
  double latency_sum = 0;  // ms
  Bytes backhaul_bytes = 0;

  // 0 when no requests were seen.
  double hit_ratio() const;
  Millis avg_latency() const;

  void record(const ServingDecision& decision, Bytes file_size);

  bool operator==(const Counters&) const = default;
};

struct Metrics {
  Counters total;
  std::vector<Counters> per_cell;

  double hit_ratio() const { return total.hit_ratio(); }
  Millis avg_latency() const { return total.avg_latency(); }

  bool operator==(const Metrics&) const = default;
};

// Throws kInternal if the hit/miss partition or the per-cell sums are off.
void check_accounting(const Metrics& metrics);

// Cost-minimal visible source for the request.
inline ServingDecision route_request(const CachePlacement& placement,
                                     const Request& request,
                                     const CostModel& cost,
                                     ArchitectureMode mode) {
  return serving_cost(placement, request.cell, request.file, cost, mode);
}

struct SimulationOptions {
  // Re-check the accounting identities after every request.
  bool check_invariants = false;
  // Called after each request is recorded and before the policy runs.
  std::function<void(const Request&, const ServingDecision&, const Metrics&)>
      observer;
};

struct SimulationResult {
  Metrics metrics;
  CachePlacement placement;
};

// Requests must have strictly increasing seq and in-range cells and files;
// otherwise throws kInvalidArgument naming the offending seq. Caches are only
// changed by policy actions: fetching from the origin does not populate them
// implicitly.
SimulationResult run_simulation(std::span<const Request> trace,
                                CachePlacement initial,
                                ReplacementPolicy& policy, const Model& model,
                                ArchitectureMode mode,
                                const SimulationOptions& options = {});

}  // namespace chc

#endif  // CHC_SIM_HPP_
