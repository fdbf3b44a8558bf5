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

#include "chc/sim.hpp"

#include <string>

#include "chc/error.hpp"

namespace chc {

double Counters::hit_ratio() const {
  if (total_requests == 0) return 0;
  return 1.0 - static_cast<double>(misses) / static_cast<double>(total_requests);
}

Millis Counters::avg_latency() const {
  if (total_requests == 0) return 0;
  return latency_sum / static_cast<double>(total_requests);
}

void Counters::record(const ServingDecision& decision, Bytes file_size) {
  ++total_requests;
  latency_sum += decision.latency;
  if (decision.local_hit) {
    ++hits_local;
  } else if (decision.source.is_cloud()) {
    ++hits_cloud;
  } else if (decision.source.is_edge()) {
    ++hits_neighbor;
  } else {
    ++misses;
    backhaul_bytes += file_size;
  }
}

void check_accounting(const Metrics& m) {
  auto check = [](const Counters& c, const std::string& what) {
    if (c.hits_local + c.hits_cloud + c.hits_neighbor + c.misses != c.total_requests) {
      throw Error(ErrorCode::kInternal, what + ": hits + misses != total");
    }
  };
  check(m.total, "total");
  Counters sum;
  for (std::size_t r = 0; r < m.per_cell.size(); ++r) {
    const auto& c = m.per_cell[r];
    check(c, "cell " + std::to_string(r + 1));
    sum.total_requests += c.total_requests;
    sum.hits_local += c.hits_local;
    sum.hits_cloud += c.hits_cloud;
    sum.hits_neighbor += c.hits_neighbor;
    sum.misses += c.misses;
    sum.backhaul_bytes += c.backhaul_bytes;
  }
  if (sum.total_requests != m.total.total_requests || sum.misses != m.total.misses ||
      sum.hits_local != m.total.hits_local || sum.hits_cloud != m.total.hits_cloud ||
      sum.hits_neighbor != m.total.hits_neighbor ||
      sum.backhaul_bytes != m.total.backhaul_bytes) {
    throw Error(ErrorCode::kInternal, "per-cell counters do not sum to totals");
  }
}

SimulationResult run_simulation(std::span<const Request> trace,
                                CachePlacement initial,
                                ReplacementPolicy& policy, const Model& model,
                                ArchitectureMode mode,
                                const SimulationOptions& options) {
  const auto R = model.topology.num_cells;
  const auto F = model.catalog.num_files();
  if (initial.num_cells() != R || initial.num_files() != F) {
    throw Error(ErrorCode::kInvalidArgument,
                "initial placement does not match the model dimensions");
  }
  SimulationResult result{{}, std::move(initial)};
  auto& metrics = result.metrics;
  metrics.per_cell.assign(R, Counters{});
  policy.reset(result.placement);

  bool first = true;
  std::uint64_t last_seq = 0;
  for (const auto& request : trace) {
    const auto bad = [&](const std::string& why) {
      return Error(ErrorCode::kInvalidArgument,
                   "malformed trace entry at seq " + std::to_string(request.seq) +
                       ": " + why);
    };
    if (request.cell >= R) throw bad("cell out of range");
    if (request.file >= F) throw bad("file out of range");
    if (!first && request.seq <= last_seq) throw bad("seq not strictly increasing");
    first = false;
    last_seq = request.seq;

    const auto decision = route_request(result.placement, request, model.cost, mode);
    const auto size = model.catalog.file_size[request.file];
    metrics.total.record(decision, size);
    metrics.per_cell[request.cell].record(decision, size);
    if (options.check_invariants) check_accounting(metrics);
    if (options.observer) options.observer(request, decision, metrics);

    const auto actions = policy.on_event({request, decision, result.placement});
    for (const auto& action : actions) apply_action(result.placement, action);
  }
  return result;
}

}  // namespace chc
