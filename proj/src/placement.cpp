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

#include "chc/placement.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>

#include "chc/error.hpp"
#include "text_util.hpp"

namespace chc {

std::string_view to_string(PlacementAlgorithm algorithm) {
  switch (algorithm) {
    case PlacementAlgorithm::kPcd:
      return "pcd";
    case PlacementAlgorithm::kMpcEx:
      return "mpcex";
    case PlacementAlgorithm::kFemtoX:
      return "femtox";
    case PlacementAlgorithm::kPopular:
      return "popular";
  }
  return "?";
}

PlacementAlgorithm parse_placement_algorithm(std::string_view text) {
  if (text == "pcd") return PlacementAlgorithm::kPcd;
  if (text == "mpcex") return PlacementAlgorithm::kMpcEx;
  if (text == "femtox") return PlacementAlgorithm::kFemtoX;
  if (text == "popular") return PlacementAlgorithm::kPopular;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown placement '" + std::string(text) +
                  "' (expected pcd|mpcex|femtox|popular)");
}

namespace {

struct Candidate {
  double key;
  FileIndex file;
  std::uint32_t slot;
};

// True if a ranks strictly ahead of b: larger key, then lower file, then
// lower slot.
bool ranks_ahead(const Candidate& a, const Candidate& b) {
  if (a.key != b.key) return a.key > b.key;
  if (a.file != b.file) return a.file < b.file;
  return a.slot < b.slot;
}

struct RankBehind {
  bool operator()(const Candidate& a, const Candidate& b) const {
    return ranks_ahead(b, a);
  }
};

std::vector<std::uint32_t> target_slots(const CachePlacement& placement,
                                        ArchitectureMode mode) {
  std::vector<std::uint32_t> slots;
  for (std::uint32_t s = 0; s < placement.num_slots(); ++s) {
    const auto cache = CacheId::from_slot(s);
    if (is_placement_target(mode, cache) && placement.capacity(cache) > 0) {
      slots.push_back(s);
    }
  }
  return slots;
}

// Files by descending popularity, ties by ascending index.
std::vector<FileIndex> popularity_order(const Catalog& catalog) {
  std::vector<FileIndex> order(catalog.num_files());
  std::iota(order.begin(), order.end(), FileIndex{0});
  std::stable_sort(order.begin(), order.end(), [&](FileIndex a, FileIndex b) {
    return catalog.popularity[a] > catalog.popularity[b];
  });
  return order;
}

void fill_most_popular(CachePlacement& placement, CacheId cache,
                       const std::vector<FileIndex>& order,
                       const std::vector<std::uint8_t>* excluded) {
  for (FileIndex f : order) {
    if (placement.free_bytes(cache) == 0) break;
    if (excluded != nullptr && (*excluded)[f]) continue;
    if (placement.fits(cache, f)) placement.insert(cache, f);
  }
}

CachePlacement greedy_naive(const Model& model, ArchitectureMode mode,
                            bool per_byte) {
  CachePlacement placement(model.topology, model.catalog);
  GainEvaluator gains(model, mode);
  const auto slots = target_slots(placement, mode);
  const auto F = model.catalog.num_files();
  while (true) {
    Candidate best{0, 0, 0};
    bool found = false;
    for (FileIndex f = 0; f < F; ++f) {
      for (auto s : slots) {
        const auto cache = CacheId::from_slot(s);
        if (placement.contains_slot(s, f) || !placement.fits(cache, f)) continue;
        double key = gains.gain(f, cache);
        if (per_byte) key /= static_cast<double>(model.catalog.file_size[f]);
        if (!(key > 0)) continue;
        const Candidate c{key, f, s};
        if (!found || ranks_ahead(c, best)) {
          best = c;
          found = true;
        }
      }
    }
    if (!found) break;
    const auto cache = CacheId::from_slot(best.slot);
    placement.insert(cache, best.file);
    gains.commit(best.file, cache);
  }
  return placement;
}

CachePlacement greedy_lazy(const Model& model, ArchitectureMode mode,
                           bool per_byte) {
  CachePlacement placement(model.topology, model.catalog);
  GainEvaluator gains(model, mode);
  const auto slots = target_slots(placement, mode);
  const auto F = model.catalog.num_files();

  auto key_of = [&](FileIndex f, CacheId cache) {
    double key = gains.gain(f, cache);
    if (per_byte) key /= static_cast<double>(model.catalog.file_size[f]);
    return key;
  };

  std::vector<Candidate> initial;
  initial.reserve(static_cast<std::size_t>(F) * slots.size());
  for (FileIndex f = 0; f < F; ++f) {
    for (auto s : slots) {
      const auto cache = CacheId::from_slot(s);
      if (!placement.fits(cache, f)) continue;
      const double key = key_of(f, cache);
      // Gains never increase, so a non-positive candidate stays dead.
      if (key > 0) initial.push_back({key, f, s});
    }
  }
  std::priority_queue<Candidate, std::vector<Candidate>, RankBehind> heap(
      RankBehind{}, std::move(initial));

  while (!heap.empty()) {
    Candidate top = heap.top();
    heap.pop();
    const auto cache = CacheId::from_slot(top.slot);
    // Free space only shrinks, so a candidate that does not fit is dropped.
    if (!placement.fits(cache, top.file)) continue;
    top.key = key_of(top.file, cache);
    if (!(top.key > 0)) continue;
    if (heap.empty() || !ranks_ahead(heap.top(), top)) {
      placement.insert(cache, top.file);
      gains.commit(top.file, cache);
    } else {
      heap.push(top);
    }
  }
  return placement;
}

}  // namespace

CachePlacement pcd_greedy(const Model& model, ArchitectureMode mode,
                          GreedyOptions options) {
  const bool per_byte = !model.catalog.uniform_size();
  return options.lazy ? greedy_lazy(model, mode, per_byte)
                      : greedy_naive(model, mode, per_byte);
}

CachePlacement brute_force_optimal(const Model& model, ArchitectureMode mode,
                                   BruteForceLimits limits) {
  const auto F = model.catalog.num_files();
  if (F > limits.max_files || F > 20) {
    throw Error(ErrorCode::kInstanceTooLarge,
                "brute force: " + std::to_string(F) + " files exceeds limit " +
                    std::to_string(std::min<FileIndex>(limits.max_files, 20)));
  }
  CachePlacement empty(model.topology, model.catalog);
  const auto slots = target_slots(empty, mode);
  const auto R = model.topology.num_cells;
  const std::uint32_t all_files = (1u << F) - 1;

  // Maximal feasible subsets per slot. Saving is monotone, so some maximal
  // placement attains the optimum.
  std::vector<std::vector<std::uint32_t>> subsets(slots.size());
  std::uint64_t combos = 1;
  for (std::size_t j = 0; j < slots.size(); ++j) {
    const Bytes cap = empty.capacity(CacheId::from_slot(slots[j]));
    for (std::uint32_t mask = 0; mask <= all_files; ++mask) {
      Bytes used = 0;
      for (FileIndex f = 0; f < F; ++f) {
        if (mask & (1u << f)) used += model.catalog.file_size[f];
      }
      if (used > cap) continue;
      bool maximal = true;
      for (FileIndex f = 0; f < F && maximal; ++f) {
        if (!(mask & (1u << f)) && model.catalog.file_size[f] <= cap - used) {
          maximal = false;
        }
      }
      if (maximal) subsets[j].push_back(mask);
    }
    combos *= subsets[j].size();
    if (combos > limits.max_placements) {
      throw Error(ErrorCode::kInstanceTooLarge,
                  "brute force: more than " +
                      std::to_string(limits.max_placements) + " placements");
    }
  }
  if (slots.empty()) return empty;

  // latency[r][s] for each cell and slot; infinity when not visible.
  constexpr Millis kInvisible = std::numeric_limits<Millis>::infinity();
  const auto num_slots = empty.num_slots();
  std::vector<Millis> via(static_cast<std::size_t>(R) * num_slots, kInvisible);
  for (CellIndex r = 0; r < R; ++r) {
    for (std::uint32_t s = 0; s < num_slots; ++s) {
      if (auto lat = access_latency(CacheId::from_slot(s), r, model.cost, mode)) {
        via[r * num_slots + s] = *lat;
      }
    }
  }
  auto file_saving = [&](FileIndex f, std::uint32_t holders) {
    double sum = 0;
    for (CellIndex r = 0; r < R; ++r) {
      Millis lat = model.cost.origin;
      for (std::uint32_t s = 0; s < num_slots; ++s) {
        if (holders & (1u << s)) lat = std::min(lat, via[r * num_slots + s]);
      }
      sum += static_cast<double>(model.topology.users_per_cell[r]) *
             (model.cost.origin - lat);
    }
    return model.catalog.popularity[f] * sum;
  };

  const std::size_t last = slots.size() - 1;
  std::vector<std::size_t> choice(slots.size(), 0);
  std::vector<std::size_t> best_choice(slots.size(), 0);
  double best_value = -1;
  std::vector<std::uint32_t> holders(F);
  std::vector<double> delta(F);

  // Odometer over all but the last slot; the last slot's subsets are scored
  // from per-file deltas.
  while (true) {
    std::fill(holders.begin(), holders.end(), 0u);
    for (std::size_t j = 0; j < last; ++j) {
      const auto mask = subsets[j][choice[j]];
      for (FileIndex f = 0; f < F; ++f) {
        if (mask & (1u << f)) holders[f] |= 1u << slots[j];
      }
    }
    double base = 0;
    for (FileIndex f = 0; f < F; ++f) {
      const double without = file_saving(f, holders[f]);
      base += without;
      delta[f] = file_saving(f, holders[f] | (1u << slots[last])) - without;
    }
    for (std::size_t k = 0; k < subsets[last].size(); ++k) {
      const auto mask = subsets[last][k];
      double value = base;
      for (FileIndex f = 0; f < F; ++f) {
        if (mask & (1u << f)) value += delta[f];
      }
      if (value > best_value) {
        best_value = value;
        best_choice = choice;
        best_choice[last] = k;
      }
    }
    // Advance the odometer; slot order is most significant first.
    bool done = true;
    for (std::size_t j = last; j-- > 0;) {
      if (++choice[j] < subsets[j].size()) {
        done = false;
        break;
      }
      choice[j] = 0;
    }
    if (done) break;
  }

  CachePlacement result = empty;
  for (std::size_t j = 0; j < slots.size(); ++j) {
    const auto mask = subsets[j][best_choice[j]];
    for (FileIndex f = 0; f < F; ++f) {
      if (mask & (1u << f)) result.insert(CacheId::from_slot(slots[j]), f);
    }
  }
  return result;
}

Topology split_total_capacity(const Topology& base, Bytes total,
                              double cloud_ratio) {
  if (!(cloud_ratio >= 0) || !std::isfinite(cloud_ratio)) {
    throw Error(ErrorCode::kInvalidArgument, "cloud_ratio must be finite and >= 0");
  }
  Topology t = base;
  const auto R = base.num_cells;
  const long double share =
      static_cast<long double>(total) / (static_cast<long double>(R) + cloud_ratio);
  const Bytes edge = static_cast<Bytes>(std::floor(share));
  t.edge_capacity.assign(R, edge);
  t.cloud_capacity = total - edge * R;
  return t;
}

Topology redistribute_to_edges(const Topology& topology) {
  Topology t = topology;
  const auto R = topology.num_cells;
  const Bytes total = topology.total_capacity();
  t.cloud_capacity = 0;
  t.edge_capacity.assign(R, 0);
  for (CellIndex r = 0; r < R; ++r) {
    t.edge_capacity[r] = total / R + (r < total % R ? 1 : 0);
  }
  return t;
}

Topology redistribute_to_cloud(const Topology& topology) {
  Topology t = topology;
  t.cloud_capacity = topology.total_capacity();
  t.edge_capacity.assign(topology.num_cells, 0);
  return t;
}

Topology architecture_topology(const Topology& topology, ArchitectureMode mode) {
  switch (mode) {
    case ArchitectureMode::kEdgeOnly:
      return redistribute_to_edges(topology);
    case ArchitectureMode::kCloudOnly:
      return redistribute_to_cloud(topology);
    default:
      return topology;
  }
}

CachePlacement edge_only_placement(const Model& model) {
  Model m = model;
  m.topology = redistribute_to_edges(model.topology);
  return pcd_greedy(m, ArchitectureMode::kEdgeOnly);
}

CachePlacement cloud_only_placement(const Model& model) {
  Model m = model;
  m.topology = redistribute_to_cloud(model.topology);
  return pcd_greedy(m, ArchitectureMode::kCloudOnly);
}

CachePlacement mpc_ex_placement(const Model& model) {
  CachePlacement placement(model.topology, model.catalog);
  const auto order = popularity_order(model.catalog);
  std::vector<std::uint8_t> at_edge(model.catalog.num_files(), 0);
  for (CellIndex r = 0; r < model.topology.num_cells; ++r) {
    const auto cache = CacheId::edge(r);
    fill_most_popular(placement, cache, order, nullptr);
    for (FileIndex f : placement.files(cache)) at_edge[f] = 1;
  }
  fill_most_popular(placement, CacheId::cloud(), order, &at_edge);
  return placement;
}

CachePlacement femto_x_placement(const Model& model) {
  Model m = model;
  m.topology = redistribute_to_edges(model.topology);
  return pcd_greedy(m, ArchitectureMode::kChc);
}

CachePlacement most_popular_placement(const Model& model, ArchitectureMode mode) {
  CachePlacement placement(model.topology, model.catalog);
  const auto order = popularity_order(model.catalog);
  for (std::uint32_t s = 0; s < placement.num_slots(); ++s) {
    const auto cache = CacheId::from_slot(s);
    if (is_placement_target(mode, cache)) {
      fill_most_popular(placement, cache, order, nullptr);
    }
  }
  return placement;
}

CachePlacement compute_placement(const Model& model, ArchitectureMode mode,
                                 PlacementAlgorithm algorithm) {
  Model m = model;
  m.topology = architecture_topology(model.topology, mode);
  // Single-tier architectures leave the baselines nothing to choose beyond
  // filling the one visible tier by popularity.
  const bool single_tier =
      mode == ArchitectureMode::kEdgeOnly || mode == ArchitectureMode::kCloudOnly;
  switch (algorithm) {
    case PlacementAlgorithm::kPcd:
      return pcd_greedy(m, mode);
    case PlacementAlgorithm::kMpcEx:
      return single_tier ? most_popular_placement(m, mode) : mpc_ex_placement(m);
    case PlacementAlgorithm::kFemtoX:
      if (single_tier) return most_popular_placement(m, mode);
      if (mode == ArchitectureMode::kNonCoop) {
        m.topology = redistribute_to_edges(m.topology);
        return pcd_greedy(m, mode);
      }
      return femto_x_placement(m);
    case PlacementAlgorithm::kPopular:
      return most_popular_placement(m, mode);
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown placement algorithm");
}

std::string write_placement(const CachePlacement& placement) {
  std::string out;
  for (std::uint32_t s = 0; s < placement.num_slots(); ++s) {
    const auto cache = CacheId::from_slot(s);
    const auto name = cache.to_string();
    for (FileIndex f : placement.files(cache)) {
      out += name;
      out += '\t';
      out += std::to_string(f + 1);
      out += '\n';
    }
  }
  return out;
}

CachePlacement read_placement(std::string_view input, const Topology& topology,
                              const Catalog& catalog) {
  CachePlacement placement(topology, catalog);
  text::for_each_line(input, [&](std::size_t line_no, std::string_view line) {
    if (line.empty()) return;
    const auto where = " at line " + std::to_string(line_no);
    const auto fields = text::split(line, '\t');
    if (fields.size() != 2) {
      throw Error(ErrorCode::kParse, "placement: expected cache_id<TAB>file_id" + where);
    }
    CacheId cache = CacheId::origin();
    try {
      cache = CacheId::parse(fields[0]);
    } catch (const Error&) {
      throw Error(ErrorCode::kParse, "placement: bad cache id" + where);
    }
    if (cache.is_origin() || (cache.is_edge() && cache.cell() >= topology.num_cells)) {
      throw Error(ErrorCode::kParse, "placement: cache out of range" + where);
    }
    const auto id = text::parse_u64(fields[1]);
    if (!id || *id == 0 || *id > catalog.num_files()) {
      throw Error(ErrorCode::kParse, "placement: file out of range" + where);
    }
    const auto file = static_cast<FileIndex>(*id - 1);
    try {
      placement.insert(cache, file);
    } catch (const Error& e) {
      throw Error(e.code(), std::string("placement: ") + e.what() + where);
    }
  });
  return placement;
}

}  // namespace chc
