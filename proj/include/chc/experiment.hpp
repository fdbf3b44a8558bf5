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

// Experiment runner: JSON configs, single runs, capacity sweeps, the
// greedy-versus-optimal oracle report and trace generation. The command-line
// tool is a thin shell over these functions (through the C API).

#ifndef CHC_EXPERIMENT_HPP_
#define CHC_EXPERIMENT_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "chc/model.hpp"
#include "chc/objective.hpp"
#include "chc/placement.hpp"
#include "chc/replacement.hpp"
#include "chc/sim.hpp"
#include "chc/trace.hpp"

namespace chc {

enum class PopularitySource {
  kTrace,    // estimated from the (estimation part of the) trace
  kZipf,     // zipf_popularity(num_files, zipf_exponent)
  kUniform,  // 1 / F
  kFile,     // catalog CSV
};

// Initial placement choice. kNone starts from empty caches, which is how the
// LRU baseline is normally run.
struct PlacementChoice {
  bool none = false;
  PlacementAlgorithm algorithm = PlacementAlgorithm::kPcd;

  static PlacementChoice parse(std::string_view text);  // adds "none"
  std::string_view name() const;
  bool operator==(const PlacementChoice&) const = default;
};

struct ExperimentConfig {
  std::uint32_t num_cells = 0;
  std::vector<std::uint64_t> users_per_cell;

  // Capacity: either a total split by the architecture rules, or explicit
  // per-cache capacities. Totals accept byte counts, decimal-unit suffixes
  // (B, KB, MB, GB, TB) or a percentage of catalog bytes ("5%").
  std::string total_capacity;
  std::vector<Bytes> edge_capacity;
  Bytes cloud_capacity = 0;
  double cloud_ratio = 4;

  CostModel cost;

  std::optional<FileIndex> num_files;
  Bytes file_size = 20 * kMegabyte;
  PopularitySource popularity = PopularitySource::kTrace;
  double zipf_exponent = 0.8;
  std::string catalog_path;

  std::string trace_path;               // canonical CSV; empty => synthetic
  std::uint64_t synthetic_requests = 0;
  double synthetic_exponent = 0.8;

  ArchitectureMode mode = ArchitectureMode::kChc;
  PlacementChoice placement;
  PolicyKind policy = PolicyKind::kStatic;
  RcrOptions rcr;
  std::uint64_t seed = 1;
  double split = 0;
  unsigned threads = 0;  // 0 => hardware concurrency
};

// Throws kParse on malformed JSON or schema violations. Relative paths are
// resolved against `base_dir`.
ExperimentConfig parse_config(std::string_view json_text,
                              const std::string& base_dir = "");
ExperimentConfig load_config(const std::string& path);

// Command-line style overrides: mode, policy, placement, seed, trace, split,
// threads, capacity, cloud_ratio.
void apply_override(ExperimentConfig& config, std::string_view key,
                    std::string_view value);

Bytes parse_capacity(std::string_view text, Bytes catalog_bytes);
std::vector<Bytes> parse_capacity_list(std::string_view text, Bytes catalog_bytes);

// Model plus the requests to replay. Model capacities come from the config
// (split total or explicit).
struct Workload {
  Model model;
  RequestTrace trace;
  std::span<const Request> replay;

  Bytes catalog_bytes() const;
};

Workload prepare_workload(const ExperimentConfig& config);
RequestTrace generate_trace(const ExperimentConfig& config);

struct RunRow {
  ArchitectureMode mode = ArchitectureMode::kChc;
  PolicyKind policy = PolicyKind::kStatic;
  PlacementChoice placement;
  Bytes total_capacity = 0;
  Metrics metrics;
};

// One placement + replay with the given capacities (before architecture
// redistribution).
RunRow run_point(const Workload& workload, const Topology& capacities,
                 ArchitectureMode mode, PlacementChoice placement,
                 PolicyKind policy, const RcrOptions& rcr = {});

RunRow run_experiment(const ExperimentConfig& config, const Workload& workload);

struct SweepRequest {
  std::vector<Bytes> capacities;
  std::vector<ArchitectureMode> modes;
  std::vector<PlacementChoice> placements;
  std::vector<PolicyKind> policies;
};

// Runs every (capacity, mode, placement, policy) combination on a worker
// pool. Rows come back in that nesting order regardless of completion order.
std::vector<RunRow> run_sweep(const ExperimentConfig& config,
                              const Workload& workload,
                              const SweepRequest& sweep);

// mode,policy,total_capacity_bytes,hit_ratio,avg_latency_ms,backhaul_bytes,
// hits_local,hits_cloud,hits_neighbor,misses,placement
std::string csv_header();
std::string csv_row(const RunRow& row);
std::string to_csv(std::span<const RunRow> rows);

// Validates the config and the model it describes.
ValidationReport validate_config(const ExperimentConfig& config);

struct OracleInstance {
  Model model;
  std::uint64_t seed = 0;
};

// Small random CHC instance: 1-3 cells, 2-8 unit-size files, cache slots
// 0-4, integer latencies with a dominant origin.
OracleInstance random_oracle_instance(std::uint64_t seed);

struct OracleReport {
  std::uint32_t instances = 0;
  double min_ratio = 1;
  double mean_ratio = 1;
  std::uint64_t worst_seed = 0;
  double seconds = 0;

  std::string to_string() const;
};

// delay_saving(pcd_greedy) / delay_saving(brute_force_optimal) over
// `instances` seeded instances. An instance whose optimum is zero counts
// as ratio 1.
OracleReport run_oracle(std::uint64_t seed, std::uint32_t instances);

}  // namespace chc

#endif  // CHC_EXPERIMENT_HPP_
