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

#include "chc/replacement.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "chc/error.hpp"

namespace chc {

void apply_action(CachePlacement& placement, const ReplacementAction& action) {
  const auto where = " (" + action.cache.to_string() + ")";
  for (FileIndex f : action.evict) {
    if (f >= placement.num_files() || !placement.contains(action.cache, f)) {
      throw Error(ErrorCode::kInternal,
                  "action evicts non-resident file " + std::to_string(f + 1) + where);
    }
  }
  if (action.insert >= placement.num_files() ||
      placement.contains(action.cache, action.insert)) {
    throw Error(ErrorCode::kInternal, "action inserts resident file " +
                                          std::to_string(action.insert + 1) + where);
  }
  Bytes freed = 0;
  for (FileIndex f : action.evict) freed += placement.file_size(f);
  if (placement.file_size(action.insert) > placement.free_bytes(action.cache) + freed) {
    throw Error(ErrorCode::kInternal, "action overfills cache" + where);
  }
  for (FileIndex f : action.evict) placement.erase(action.cache, f);
  placement.insert(action.cache, action.insert);
}

std::string_view to_string(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::kRcr:
      return "rcr";
    case PolicyKind::kLru:
      return "lru";
    case PolicyKind::kStatic:
      return "static";
  }
  return "?";
}

PolicyKind parse_policy(std::string_view text) {
  if (text == "rcr") return PolicyKind::kRcr;
  if (text == "lru") return PolicyKind::kLru;
  if (text == "static") return PolicyKind::kStatic;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown policy '" + std::string(text) + "' (expected rcr|lru|static)");
}

// ---------------------------------------------------------------------------
// LRU

LruPolicy::LruPolicy(const Model& model, ArchitectureMode mode)
    : model_(model), mode_(mode) {}

void LruPolicy::reset(const CachePlacement& placement) {
  const auto slots = placement.num_slots();
  order_.assign(slots, {});
  where_.assign(slots, std::vector<std::list<FileIndex>::iterator>(placement.num_files()));
  listed_.assign(slots, std::vector<std::uint8_t>(placement.num_files(), 0));
  for (std::uint32_t s = 0; s < slots; ++s) {
    for (FileIndex f : placement.files(CacheId::from_slot(s))) {
      where_[s][f] = order_[s].insert(order_[s].end(), f);
      listed_[s][f] = 1;
    }
  }
}

void LruPolicy::touch(std::uint32_t slot, FileIndex file) {
  if (!listed_[slot][file]) return;
  order_[slot].splice(order_[slot].begin(), order_[slot], where_[slot][file]);
}

std::optional<ReplacementAction> LruPolicy::admit(const CachePlacement& placement,
                                                  CacheId cache, FileIndex file) {
  if (!is_placement_target(mode_, cache)) return std::nullopt;
  const auto size = placement.file_size(file);
  if (size > placement.capacity(cache) || placement.contains(cache, file)) {
    return std::nullopt;
  }
  const auto s = cache.slot();
  ReplacementAction action{cache, {}, file};
  Bytes free = placement.free_bytes(cache);
  while (free < size) {
    const FileIndex victim = order_[s].back();
    order_[s].pop_back();
    listed_[s][victim] = 0;
    free += placement.file_size(victim);
    action.evict.push_back(victim);
  }
  where_[s][file] = order_[s].insert(order_[s].begin(), file);
  listed_[s][file] = 1;
  return action;
}

std::vector<ReplacementAction> LruPolicy::on_event(const PolicyEvent& event) {
  const auto cell = event.request.cell;
  const auto file = event.request.file;
  const auto& source = event.decision.source;
  std::vector<ReplacementAction> actions;

  if (!source.is_origin()) touch(source.slot(), file);
  if (event.decision.local_hit) return actions;

  if (auto a = admit(event.placement, CacheId::edge(cell), file)) {
    actions.push_back(std::move(*a));
  }
  if (!source.is_cloud()) {
    if (auto a = admit(event.placement, CacheId::cloud(), file)) {
      actions.push_back(std::move(*a));
    }
  }
  return actions;
}

// ---------------------------------------------------------------------------
// RCR

namespace {
constexpr double kRenormalizeAbove = 1e200;
}  // namespace

RcrPolicy::RcrPolicy(const Model& model, ArchitectureMode mode, RcrOptions options)
    : model_(model), mode_(mode), options_(options) {
  if (options_.popularity == RcrOptions::Popularity::kEmpirical &&
      !(options_.decay > 0 && options_.decay <= 1)) {
    throw Error(ErrorCode::kInvalidArgument, "rcr decay must be in (0, 1]");
  }
}

void RcrPolicy::reset(const CachePlacement& placement) {
  if (options_.popularity == RcrOptions::Popularity::kApriori) {
    score_ = model_.catalog.popularity;
  } else {
    score_.assign(model_.catalog.num_files(), 0.0);
  }
  increment_ = 1;
  resident_.assign(placement.num_slots(),
                   std::vector<std::uint8_t>(placement.num_files(), 0));
  for (std::uint32_t s = 0; s < placement.num_slots(); ++s) {
    for (FileIndex f : placement.files(CacheId::from_slot(s))) resident_[s][f] = 1;
  }
  rebuild_index(placement);
  last_delta_ = 0;
}

void RcrPolicy::rebuild_index(const CachePlacement& placement) {
  residents_.assign(placement.num_slots(), {});
  for (std::uint32_t s = 0; s < placement.num_slots(); ++s) {
    for (FileIndex f = 0; f < placement.num_files(); ++f) {
      if (resident_[s][f]) residents_[s].emplace(score_[f], f);
    }
  }
}

void RcrPolicy::observe(FileIndex file) {
  increment_ /= options_.decay;
  const double old_score = score_[file];
  score_[file] += increment_;
  for (std::uint32_t s = 0; s < residents_.size(); ++s) {
    if (!resident_[s][file]) continue;
    residents_[s].erase({old_score, file});
    residents_[s].emplace(score_[file], file);
  }
  if (increment_ > kRenormalizeAbove) {
    for (auto& v : score_) v /= increment_;
    increment_ = 1;
    residents_.assign(residents_.size(), {});
    for (std::uint32_t s = 0; s < resident_.size(); ++s) {
      for (FileIndex f = 0; f < resident_[s].size(); ++f) {
        if (resident_[s][f]) residents_[s].emplace(score_[f], f);
      }
    }
  }
}

double RcrPolicy::user_delay(const CachePlacement& placement, FileIndex file,
                             std::uint32_t toggled_slot, bool present) const {
  const auto& topo = model_.topology;
  double total = 0;
  for (CellIndex r = 0; r < topo.num_cells; ++r) {
    if (topo.users_per_cell[r] == 0) continue;
    Millis best = model_.cost.origin;
    for (std::uint32_t s = 0; s < placement.num_slots(); ++s) {
      const bool held = s == toggled_slot ? present : placement.contains_slot(s, file);
      if (!held) continue;
      if (auto lat = access_latency(CacheId::from_slot(s), r, model_.cost, mode_)) {
        best = std::min(best, *lat);
      }
    }
    total += static_cast<double>(topo.users_per_cell[r]) * best;
  }
  return total;
}

std::vector<ReplacementAction> RcrPolicy::on_event(const PolicyEvent& event) {
  const auto file = event.request.file;
  if (options_.popularity == RcrOptions::Popularity::kEmpirical) observe(file);
  if (!event.decision.source.is_origin()) return {};

  const auto& placement = event.placement;
  const auto size = placement.file_size(file);
  const std::uint32_t none = std::numeric_limits<std::uint32_t>::max();
  const double new_before = user_delay(placement, file, none, false);

  std::optional<ReplacementAction> best;
  double best_delta = 0;
  for (const CacheId cache : {CacheId::edge(event.request.cell), CacheId::cloud()}) {
    if (!is_placement_target(mode_, cache)) continue;
    if (size > placement.capacity(cache) || placement.contains(cache, file)) continue;
    const auto s = cache.slot();

    // Least popular first. With uniform sizes this is the smallest victim
    // set, and among those the one with the lowest total popularity.
    ReplacementAction action{cache, {}, file};
    Bytes free = placement.free_bytes(cache);
    for (auto it = residents_[s].begin(); free < size && it != residents_[s].end(); ++it) {
      action.evict.push_back(it->second);
      free += placement.file_size(it->second);
    }

    // Saving is separable per file: only the new file and the victims move.
    double delta = weight(file) * (new_before - user_delay(placement, file, s, true));
    for (FileIndex v : action.evict) {
      delta -= weight(v) * (user_delay(placement, v, s, false) -
                            user_delay(placement, v, none, false));
    }
    if (delta > best_delta) {
      best_delta = delta;
      best = std::move(action);
    }
  }
  if (!best) return {};

  const auto s = best->cache.slot();
  for (FileIndex v : best->evict) {
    residents_[s].erase({score_[v], v});
    resident_[s][v] = 0;
  }
  residents_[s].emplace(score_[file], file);
  resident_[s][file] = 1;
  last_delta_ = best_delta;
  return {std::move(*best)};
}

std::unique_ptr<ReplacementPolicy> make_policy(PolicyKind kind, const Model& model,
                                               ArchitectureMode mode, RcrOptions rcr) {
  switch (kind) {
    case PolicyKind::kRcr:
      return std::make_unique<RcrPolicy>(model, mode, rcr);
    case PolicyKind::kLru:
      return std::make_unique<LruPolicy>(model, mode);
    case PolicyKind::kStatic:
      return std::make_unique<StaticPolicy>();
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown policy");
}

}  // namespace chc
