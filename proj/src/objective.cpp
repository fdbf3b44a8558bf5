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

#include "chc/objective.hpp"

#include <algorithm>
#include <string>

#include "chc/error.hpp"

namespace chc {

namespace {

bool local_visible(ArchitectureMode mode) {
  return mode != ArchitectureMode::kCloudOnly;
}
bool cloud_visible(ArchitectureMode mode) {
  return mode != ArchitectureMode::kEdgeOnly;
}
bool neighbors_visible(ArchitectureMode mode) {
  return mode == ArchitectureMode::kChc;
}

}  // namespace

std::string_view to_string(ArchitectureMode mode) {
  switch (mode) {
    case ArchitectureMode::kChc:
      return "chc";
    case ArchitectureMode::kNonCoop:
      return "noncoop";
    case ArchitectureMode::kEdgeOnly:
      return "edgeonly";
    case ArchitectureMode::kCloudOnly:
      return "cloudonly";
  }
  return "?";
}

ArchitectureMode parse_mode(std::string_view text) {
  if (text == "chc") return ArchitectureMode::kChc;
  if (text == "noncoop") return ArchitectureMode::kNonCoop;
  if (text == "edgeonly") return ArchitectureMode::kEdgeOnly;
  if (text == "cloudonly") return ArchitectureMode::kCloudOnly;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown mode '" + std::string(text) +
                  "' (expected chc|noncoop|edgeonly|cloudonly)");
}

bool is_placement_target(ArchitectureMode mode, CacheId cache) {
  switch (cache.tier()) {
    case CacheId::Tier::kCloud:
      return cloud_visible(mode);
    case CacheId::Tier::kEdge:
      return local_visible(mode);
    case CacheId::Tier::kOrigin:
      return false;
  }
  return false;
}

std::optional<Millis> access_latency(CacheId source, CellIndex cell,
                                     const CostModel& cost,
                                     ArchitectureMode mode) {
  switch (source.tier()) {
    case CacheId::Tier::kOrigin:
      return cost.origin;
    case CacheId::Tier::kCloud:
      if (!cloud_visible(mode)) return std::nullopt;
      return cost.fronthaul[cell];
    case CacheId::Tier::kEdge:
      if (source.cell() == cell) {
        if (!local_visible(mode)) return std::nullopt;
        return Millis{0};
      }
      if (!neighbors_visible(mode)) return std::nullopt;
      return cost.neighbor(cell, source.cell());
  }
  return std::nullopt;
}

ServingDecision serving_cost(const CachePlacement& placement, CellIndex cell,
                             FileIndex file, const CostModel& cost,
                             ArchitectureMode mode) {
  if (local_visible(mode) && placement.contains_slot(cell + 1, file)) {
    return {CacheId::edge(cell), 0, true};
  }
  ServingDecision best{CacheId::origin(), cost.origin, false};
  bool found = false;
  if (cloud_visible(mode) && placement.contains_slot(0, file)) {
    best = {CacheId::cloud(), cost.fronthaul[cell], false};
    found = true;
  }
  if (neighbors_visible(mode)) {
    const auto R = placement.num_cells();
    for (CellIndex k = 0; k < R; ++k) {
      if (k == cell || !placement.contains_slot(k + 1, file)) continue;
      const Millis via = cost.neighbor(cell, k);
      if (!found || via < best.latency) {
        best = {CacheId::edge(k), via, false};
        found = true;
      }
    }
  }
  // A cache hit that costs more than the CDN is not taken.
  if (found && cost.origin < best.latency) {
    return {CacheId::origin(), cost.origin, false};
  }
  return best;
}

Millis expected_cell_delay(const CachePlacement& placement, CellIndex cell,
                           const Catalog& catalog, const CostModel& cost,
                           ArchitectureMode mode) {
  double sum = 0;
  for (FileIndex i = 0; i < catalog.num_files(); ++i) {
    sum += catalog.popularity[i] *
           serving_cost(placement, cell, i, cost, mode).latency;
  }
  return sum;
}

double total_expected_delay(const CachePlacement& placement,
                            const Topology& topology, const Catalog& catalog,
                            const CostModel& cost, ArchitectureMode mode) {
  double total = 0;
  for (CellIndex r = 0; r < topology.num_cells; ++r) {
    if (topology.users_per_cell[r] == 0) continue;
    total += static_cast<double>(topology.users_per_cell[r]) *
             expected_cell_delay(placement, r, catalog, cost, mode);
  }
  return total;
}

double delay_saving(const CachePlacement& placement, const Topology& topology,
                    const Catalog& catalog, const CostModel& cost,
                    ArchitectureMode mode) {
  double total = 0;
  for (CellIndex r = 0; r < topology.num_cells; ++r) {
    if (topology.users_per_cell[r] == 0) continue;
    double cell = 0;
    for (FileIndex i = 0; i < catalog.num_files(); ++i) {
      const auto lat = serving_cost(placement, r, i, cost, mode).latency;
      cell += catalog.popularity[i] * (cost.origin - lat);
    }
    total += static_cast<double>(topology.users_per_cell[r]) * cell;
  }
  return total;
}

double file_user_delay(const CachePlacement& placement, FileIndex file,
                       const Topology& topology, const CostModel& cost,
                       ArchitectureMode mode) {
  double total = 0;
  for (CellIndex r = 0; r < topology.num_cells; ++r) {
    if (topology.users_per_cell[r] == 0) continue;
    total += static_cast<double>(topology.users_per_cell[r]) *
             serving_cost(placement, r, file, cost, mode).latency;
  }
  return total;
}

double marginal_gain(const CachePlacement& placement, FileIndex file,
                     CacheId cache, const Model& model, ArchitectureMode mode) {
  if (cache.is_origin()) {
    throw Error(ErrorCode::kInvalidArgument, "origin is not a placement target");
  }
  if (placement.contains(cache, file)) return 0;
  if (!placement.fits(cache, file)) {
    throw Error(ErrorCode::kCapacityExceeded,
                "file " + std::to_string(file + 1) + " does not fit in " +
                    cache.to_string());
  }
  const auto& topo = model.topology;
  double sum = 0;
  for (CellIndex r = 0; r < topo.num_cells; ++r) {
    if (topo.users_per_cell[r] == 0) continue;
    const auto via = access_latency(cache, r, model.cost, mode);
    if (!via) continue;
    const Millis before = serving_cost(placement, r, file, model.cost, mode).latency;
    sum += static_cast<double>(topo.users_per_cell[r]) * std::max(0.0, before - *via);
  }
  return model.catalog.popularity[file] * sum;
}

GainEvaluator::GainEvaluator(const Model& model, ArchitectureMode mode)
    : model_(model),
      mode_(mode),
      num_files_(model.catalog.num_files()),
      best_(static_cast<std::size_t>(model.topology.num_cells) * num_files_,
            model.cost.origin) {
  users_.reserve(model.topology.num_cells);
  for (auto u : model.topology.users_per_cell) users_.push_back(static_cast<double>(u));
}

GainEvaluator::GainEvaluator(const Model& model, ArchitectureMode mode,
                             const CachePlacement& start)
    : GainEvaluator(model, mode) {
  for (CellIndex r = 0; r < model.topology.num_cells; ++r) {
    for (FileIndex i = 0; i < num_files_; ++i) {
      best_[static_cast<std::size_t>(r) * num_files_ + i] =
          serving_cost(start, r, i, model.cost, mode).latency;
    }
  }
}

double GainEvaluator::gain(FileIndex file, CacheId cache) const {
  double sum = 0;
  const auto R = model_.topology.num_cells;
  for (CellIndex r = 0; r < R; ++r) {
    if (users_[r] == 0) continue;
    const auto via = access_latency(cache, r, model_.cost, mode_);
    if (!via) continue;
    sum += users_[r] * std::max(0.0, best_latency(r, file) - *via);
  }
  return model_.catalog.popularity[file] * sum;
}

void GainEvaluator::commit(FileIndex file, CacheId cache) {
  const auto R = model_.topology.num_cells;
  for (CellIndex r = 0; r < R; ++r) {
    const auto via = access_latency(cache, r, model_.cost, mode_);
    if (!via) continue;
    auto& best = best_[static_cast<std::size_t>(r) * num_files_ + file];
    best = std::min(best, *via);
  }
}

}  // namespace chc
