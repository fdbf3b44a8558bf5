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

// Online replacement policies. A policy sees each routed request and returns
// the placement changes it wants; the simulator applies them in order before
// the next request. Policies track their own bookkeeping under the
// assumption that every action they return is applied.

#ifndef CHC_REPLACEMENT_HPP_
#define CHC_REPLACEMENT_HPP_

#include <list>
#include <memory>
#include <optional>
#include <set>
#include <string_view>
#include <utility>
#include <vector>

#include "chc/model.hpp"
#include "chc/objective.hpp"
#include "chc/trace.hpp"

namespace chc {

struct ReplacementAction {
  CacheId cache = CacheId::cloud();
  std::vector<FileIndex> evict;
  FileIndex insert = 0;

  bool operator==(const ReplacementAction&) const = default;
};

struct PolicyEvent {
  const Request& request;
  const ServingDecision& decision;
  const CachePlacement& placement;
};

// Evicts then inserts. Throws kInternal if the action would break an
// invariant: evicted files must be resident, the inserted file must not be,
// and the result must fit.
void apply_action(CachePlacement& placement, const ReplacementAction& action);

class ReplacementPolicy {
 public:
  virtual ~ReplacementPolicy() = default;

  virtual std::string_view name() const = 0;
  virtual void reset(const CachePlacement& placement) = 0;
  virtual std::vector<ReplacementAction> on_event(const PolicyEvent& event) = 0;
};

enum class PolicyKind { kRcr, kLru, kStatic };

std::string_view to_string(PolicyKind kind);
// Accepts rcr | lru | static.
PolicyKind parse_policy(std::string_view text);

class StaticPolicy final : public ReplacementPolicy {
 public:
  std::string_view name() const override { return "static"; }
  void reset(const CachePlacement&) override {}
  std::vector<ReplacementAction> on_event(const PolicyEvent&) override {
    return {};
  }
};

// Least recently used, per cache. A local-edge miss inserts into the
// requester's edge; a cloud miss also inserts into the cloud when the cloud
// is part of the architecture. Hits refresh the serving cache's entry.
// Residents of the initial placement start in file-id order, highest id
// least recent.
class LruPolicy final : public ReplacementPolicy {
 public:
  LruPolicy(const Model& model, ArchitectureMode mode);

  std::string_view name() const override { return "lru"; }
  void reset(const CachePlacement& placement) override;
  std::vector<ReplacementAction> on_event(const PolicyEvent& event) override;

 private:
  void touch(std::uint32_t slot, FileIndex file);
  std::optional<ReplacementAction> admit(const CachePlacement& placement,
                                         CacheId cache, FileIndex file);

  const Model& model_;
  ArchitectureMode mode_;
  std::vector<std::list<FileIndex>> order_;  // front is most recent
  std::vector<std::vector<std::list<FileIndex>::iterator>> where_;
  std::vector<std::vector<std::uint8_t>> listed_;
};

struct RcrOptions {
  enum class Popularity {
    kApriori,    // catalog popularity
    kEmpirical,  // exponentially decayed request counts
  };
  Popularity popularity = Popularity::kApriori;
  double decay = 0.999;  // per request, empirical mode only
};

// Reactive replacement. On a request no cache could serve, considers the
// requester's edge and then the cloud. For each, the least popular residents
// are evicted until the file fits, and the change in delay saving is
// evaluated. The single best candidate is applied if it strictly improves
// the saving. Hits produce no actions.
class RcrPolicy final : public ReplacementPolicy {
 public:
  RcrPolicy(const Model& model, ArchitectureMode mode, RcrOptions options = {});

  std::string_view name() const override { return "rcr"; }
  void reset(const CachePlacement& placement) override;
  std::vector<ReplacementAction> on_event(const PolicyEvent& event) override;

  // Delay-saving change of the most recent winning action, for tests.
  double last_delta() const { return last_delta_; }

 private:
  double weight(FileIndex file) const { return score_[file]; }
  void observe(FileIndex file);
  void rebuild_index(const CachePlacement& placement);
  double user_delay(const CachePlacement& placement, FileIndex file,
                    std::uint32_t toggled_slot, bool present) const;

  const Model& model_;
  ArchitectureMode mode_;
  RcrOptions options_;
  std::vector<double> score_;
  double increment_ = 1;
  // Residents per slot ordered by (score, file): front is the first victim.
  std::vector<std::set<std::pair<double, FileIndex>>> residents_;
  std::vector<std::vector<std::uint8_t>> resident_;
  double last_delta_ = 0;
};

std::unique_ptr<ReplacementPolicy> make_policy(PolicyKind kind,
                                               const Model& model,
                                               ArchitectureMode mode,
                                               RcrOptions rcr = {});

}  // namespace chc

#endif  // CHC_REPLACEMENT_HPP_
