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

#include "chc/chc.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "chc/error.hpp"
#include "chc/experiment.hpp"
#include "text_util.hpp"

struct chc_config {
  chc::ExperimentConfig value;
};
struct chc_model {
  chc::Model value;
};
struct chc_placement {
  chc::CachePlacement value;
};
struct chc_trace {
  chc::RequestTrace value;
};

namespace {

thread_local std::string g_last_error;

chc_status to_status(chc::ErrorCode code) {
  switch (code) {
    case chc::ErrorCode::kInvalidArgument:
      return CHC_ERR_INVALID_ARGUMENT;
    case chc::ErrorCode::kIo:
      return CHC_ERR_IO;
    case chc::ErrorCode::kParse:
      return CHC_ERR_PARSE;
    case chc::ErrorCode::kValidation:
      return CHC_ERR_VALIDATION;
    case chc::ErrorCode::kCapacityExceeded:
      return CHC_ERR_CAPACITY;
    case chc::ErrorCode::kInstanceTooLarge:
      return CHC_ERR_TOO_LARGE;
    case chc::ErrorCode::kInternal:
      return CHC_ERR_INTERNAL;
  }
  return CHC_ERR_INTERNAL;
}

template <typename Fn>
chc_status guarded(Fn&& fn) {
  g_last_error.clear();
  try {
    fn();
    return CHC_OK;
  } catch (const chc::Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return CHC_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return CHC_ERR_INTERNAL;
  }
}

void require(bool condition, const char* what) {
  if (!condition) throw chc::Error(chc::ErrorCode::kInvalidArgument, what);
}

char* dup_string(const std::string& s) {
  auto* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

chc::ArchitectureMode to_mode(chc_mode mode) {
  switch (mode) {
    case CHC_MODE_CHC:
      return chc::ArchitectureMode::kChc;
    case CHC_MODE_NONCOOP:
      return chc::ArchitectureMode::kNonCoop;
    case CHC_MODE_EDGE_ONLY:
      return chc::ArchitectureMode::kEdgeOnly;
    case CHC_MODE_CLOUD_ONLY:
      return chc::ArchitectureMode::kCloudOnly;
  }
  throw chc::Error(chc::ErrorCode::kInvalidArgument, "unknown chc_mode");
}

chc::PolicyKind to_policy(chc_policy policy) {
  switch (policy) {
    case CHC_POLICY_RCR:
      return chc::PolicyKind::kRcr;
    case CHC_POLICY_LRU:
      return chc::PolicyKind::kLru;
    case CHC_POLICY_STATIC:
      return chc::PolicyKind::kStatic;
  }
  throw chc::Error(chc::ErrorCode::kInvalidArgument, "unknown chc_policy");
}

void fill_metrics(const chc::Metrics& m, chc_metrics* out) {
  const auto& t = m.total;
  out->total_requests = t.total_requests;
  out->hits_local = t.hits_local;
  out->hits_cloud = t.hits_cloud;
  out->hits_neighbor = t.hits_neighbor;
  out->misses = t.misses;
  out->hit_ratio = t.hit_ratio();
  out->avg_latency_ms = t.avg_latency();
  out->backhaul_bytes = t.backhaul_bytes;
}

template <typename T, typename Parse>
std::vector<T> parse_list(const char* text, T fallback, Parse&& parse) {
  if (text == nullptr || *text == '\0') return {fallback};
  std::vector<T> out;
  for (auto item : chc::text::split(text, ',')) {
    item = chc::text::trim(item);
    if (!item.empty()) out.push_back(parse(item));
  }
  require(!out.empty(), "empty list");
  return out;
}

}  // namespace

extern "C" {

const char* chc_version(void) { return "1.0.0"; }

const char* chc_last_error(void) { return g_last_error.c_str(); }

void chc_string_free(char* s) { std::free(s); }

chc_status chc_config_load(const char* path, chc_config** out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "null argument");
    *out = new chc_config{chc::load_config(path)};
  });
}

chc_status chc_config_parse(const char* json_text, chc_config** out) {
  return guarded([&] {
    require(json_text != nullptr && out != nullptr, "null argument");
    *out = new chc_config{chc::parse_config(json_text)};
  });
}

chc_status chc_config_set(chc_config* config, const char* key, const char* value) {
  return guarded([&] {
    require(config != nullptr && key != nullptr && value != nullptr, "null argument");
    chc::apply_override(config->value, key, value);
  });
}

void chc_config_free(chc_config* config) { delete config; }

chc_status chc_validate(const chc_config* config, char** report) {
  chc::ValidationReport result;
  const auto status = guarded([&] {
    require(config != nullptr, "null config");
    result = chc::validate_config(config->value);
    if (report != nullptr) {
      std::string text;
      if (result.ok()) {
        text = "valid";
      } else {
        for (const auto& e : result.errors) text += e + "\n";
        if (!text.empty()) text.pop_back();
      }
      *report = dup_string(text);
    }
  });
  if (status != CHC_OK) return status;
  if (!result.ok()) {
    g_last_error = result.to_string();
    return CHC_ERR_VALIDATION;
  }
  return CHC_OK;
}

chc_status chc_run(const chc_config* config, chc_metrics* metrics, char** csv) {
  return guarded([&] {
    require(config != nullptr, "null config");
    const auto workload = chc::prepare_workload(config->value);
    const auto row = chc::run_experiment(config->value, workload);
    if (metrics != nullptr) fill_metrics(row.metrics, metrics);
    if (csv != nullptr) *csv = dup_string(chc::to_csv(std::span(&row, 1)));
  });
}

chc_status chc_sweep(const chc_config* config, const char* capacities,
                     const char* modes, const char* placements,
                     const char* policies, char** csv) {
  return guarded([&] {
    require(config != nullptr && csv != nullptr, "null argument");
    const auto& c = config->value;
    const auto workload = chc::prepare_workload(c);
    chc::SweepRequest sweep;
    if (capacities == nullptr || *capacities == '\0') {
      sweep.capacities = {workload.model.topology.total_capacity()};
    } else {
      sweep.capacities = chc::parse_capacity_list(capacities, workload.catalog_bytes());
    }
    sweep.modes = parse_list(modes, c.mode, [](std::string_view s) { return chc::parse_mode(s); });
    sweep.placements = parse_list(placements, c.placement, [](std::string_view s) {
      return chc::PlacementChoice::parse(s);
    });
    sweep.policies =
        parse_list(policies, c.policy, [](std::string_view s) { return chc::parse_policy(s); });
    const auto rows = chc::run_sweep(c, workload, sweep);
    *csv = dup_string(chc::to_csv(rows));
  });
}

chc_status chc_gen_trace(const chc_config* config, char** csv) {
  return guarded([&] {
    require(config != nullptr && csv != nullptr, "null argument");
    *csv = dup_string(chc::write_trace(chc::generate_trace(config->value)));
  });
}

chc_status chc_oracle(uint64_t seed, uint32_t instances, chc_oracle_report* report) {
  return guarded([&] {
    require(report != nullptr, "null report");
    const auto r = chc::run_oracle(seed, instances);
    *report = {r.instances, r.min_ratio, r.mean_ratio, r.worst_seed, r.seconds};
  });
}

chc_status chc_model_create(uint32_t num_cells, const uint64_t* edge_capacity,
                            uint64_t cloud_capacity, const uint64_t* users_per_cell,
                            const double* fronthaul_ms, double origin_ms,
                            uint32_t num_files, const uint64_t* file_size,
                            const double* popularity, chc_model** out) {
  return guarded([&] {
    require(out != nullptr, "null out");
    require(num_cells == 0 || (edge_capacity && users_per_cell && fronthaul_ms),
            "null cell array");
    require(num_files == 0 || (file_size && popularity), "null file array");
    chc::Model m;
    m.topology.num_cells = num_cells;
    m.topology.edge_capacity.assign(edge_capacity, edge_capacity + num_cells);
    m.topology.cloud_capacity = cloud_capacity;
    m.topology.users_per_cell.assign(users_per_cell, users_per_cell + num_cells);
    m.cost.fronthaul.assign(fronthaul_ms, fronthaul_ms + num_cells);
    m.cost.origin = origin_ms;
    m.catalog.file_size.assign(file_size, file_size + num_files);
    m.catalog.popularity.assign(popularity, popularity + num_files);
    chc::require_valid(m);
    *out = new chc_model{std::move(m)};
  });
}

chc_status chc_model_from_config(const chc_config* config, chc_model** out) {
  return guarded([&] {
    require(config != nullptr && out != nullptr, "null argument");
    *out = new chc_model{chc::prepare_workload(config->value).model};
  });
}

void chc_model_free(chc_model* model) { delete model; }

chc_status chc_placement_compute(const chc_model* model, chc_mode mode,
                                 chc_placement_algorithm algorithm, chc_placement** out) {
  return guarded([&] {
    require(model != nullptr && out != nullptr, "null argument");
    const auto m = to_mode(mode);
    const auto& mv = model->value;
    switch (algorithm) {
      case CHC_PLACEMENT_NONE:
        *out = new chc_placement{
            chc::CachePlacement(chc::architecture_topology(mv.topology, m), mv.catalog)};
        return;
      case CHC_PLACEMENT_PCD:
        *out = new chc_placement{chc::compute_placement(mv, m, chc::PlacementAlgorithm::kPcd)};
        return;
      case CHC_PLACEMENT_MPCEX:
        *out = new chc_placement{chc::compute_placement(mv, m, chc::PlacementAlgorithm::kMpcEx)};
        return;
      case CHC_PLACEMENT_FEMTOX:
        *out = new chc_placement{chc::compute_placement(mv, m, chc::PlacementAlgorithm::kFemtoX)};
        return;
      case CHC_PLACEMENT_POPULAR:
        *out = new chc_placement{chc::compute_placement(mv, m, chc::PlacementAlgorithm::kPopular)};
        return;
    }
    throw chc::Error(chc::ErrorCode::kInvalidArgument, "unknown placement algorithm");
  });
}

chc_status chc_placement_parse(const chc_model* model, const char* text, chc_placement** out) {
  return guarded([&] {
    require(model != nullptr && text != nullptr && out != nullptr, "null argument");
    *out = new chc_placement{
        chc::read_placement(text, model->value.topology, model->value.catalog)};
  });
}

chc_status chc_placement_format(const chc_placement* placement, char** text) {
  return guarded([&] {
    require(placement != nullptr && text != nullptr, "null argument");
    *text = dup_string(chc::write_placement(placement->value));
  });
}

chc_status chc_placement_saving(const chc_model* model, const chc_placement* placement,
                                chc_mode mode, double* saving) {
  return guarded([&] {
    require(model != nullptr && placement != nullptr && saving != nullptr, "null argument");
    const auto& p = placement->value;
    require(p.num_cells() == model->value.topology.num_cells &&
                p.num_files() == model->value.catalog.num_files(),
            "placement does not match the model");
    *saving = chc::delay_saving(p, model->value, to_mode(mode));
  });
}

void chc_placement_free(chc_placement* placement) { delete placement; }

chc_status chc_trace_load(const chc_model* model, const char* path, chc_trace** out) {
  return guarded([&] {
    require(model != nullptr && path != nullptr && out != nullptr, "null argument");
    *out = new chc_trace{chc::load_trace(path, model->value.topology.num_cells,
                                         model->value.catalog.num_files())};
  });
}

chc_status chc_trace_generate(const chc_model* model, uint64_t requests,
                              double zipf_exponent, uint64_t seed, chc_trace** out) {
  return guarded([&] {
    require(model != nullptr && out != nullptr, "null argument");
    *out = new chc_trace{chc::generate_zipf_trace(requests, model->value.catalog.num_files(),
                                                  zipf_exponent, model->value.topology, seed)};
  });
}

chc_status chc_trace_save(const chc_trace* trace, const char* path) {
  return guarded([&] {
    require(trace != nullptr && path != nullptr, "null argument");
    chc::save_trace(path, trace->value);
  });
}

size_t chc_trace_size(const chc_trace* trace) {
  return trace == nullptr ? 0 : trace->value.size();
}

void chc_trace_free(chc_trace* trace) { delete trace; }

chc_status chc_simulate(const chc_model* model, const chc_trace* trace,
                        const chc_placement* initial, chc_mode mode, chc_policy policy,
                        chc_metrics* metrics) {
  return guarded([&] {
    require(model != nullptr && trace != nullptr && metrics != nullptr, "null argument");
    const auto& m = model->value;
    const auto arch = to_mode(mode);
    chc::CachePlacement start =
        initial != nullptr
            ? initial->value
            : chc::CachePlacement(chc::architecture_topology(m.topology, arch), m.catalog);
    auto replacement = chc::make_policy(to_policy(policy), m, arch);
    const auto result = chc::run_simulation(trace->value, std::move(start), *replacement, m, arch);
    fill_metrics(result.metrics, metrics);
  });
}

}  // extern "C"
