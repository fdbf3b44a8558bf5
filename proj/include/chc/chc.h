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

/*
 * C interface to the cooperative hierarchical caching library.
 *
 * Every function returns a chc_status. On failure a one-line diagnostic is
 * available from chc_last_error() on the calling thread until the next API
 * call on that thread. Objects are opaque handles released with their
 * matching *_free function; strings returned through char** are released
 * with chc_string_free. Cells and files are 1-based in every text format and
 * 0-based in arrays.
 */

#ifndef CHC_CHC_H_
#define CHC_CHC_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(CHC_BUILDING_LIBRARY)
#    define CHC_API __declspec(dllexport)
#  else
#    define CHC_API __declspec(dllimport)
#  endif
#else
#  define CHC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum chc_status {
  CHC_OK = 0,
  CHC_ERR_INVALID_ARGUMENT = 1,
  CHC_ERR_IO = 2,
  CHC_ERR_PARSE = 3,
  CHC_ERR_VALIDATION = 4,
  CHC_ERR_CAPACITY = 5,
  CHC_ERR_TOO_LARGE = 6,
  CHC_ERR_INTERNAL = 7
} chc_status;

typedef enum chc_mode {
  CHC_MODE_CHC = 0,
  CHC_MODE_NONCOOP = 1,
  CHC_MODE_EDGE_ONLY = 2,
  CHC_MODE_CLOUD_ONLY = 3
} chc_mode;

typedef enum chc_policy {
  CHC_POLICY_RCR = 0,
  CHC_POLICY_LRU = 1,
  CHC_POLICY_STATIC = 2
} chc_policy;

typedef enum chc_placement_algorithm {
  CHC_PLACEMENT_PCD = 0,
  CHC_PLACEMENT_MPCEX = 1,
  CHC_PLACEMENT_FEMTOX = 2,
  CHC_PLACEMENT_POPULAR = 3,
  CHC_PLACEMENT_NONE = 4
} chc_placement_algorithm;

typedef struct chc_metrics {
  uint64_t total_requests;
  uint64_t hits_local;
  uint64_t hits_cloud;
  uint64_t hits_neighbor;
  uint64_t misses;
  double hit_ratio;
  double avg_latency_ms;
  uint64_t backhaul_bytes;
} chc_metrics;

typedef struct chc_oracle_report {
  uint32_t instances;
  double min_ratio;
  double mean_ratio;
  uint64_t worst_seed;
  double seconds;
} chc_oracle_report;

typedef struct chc_config chc_config;
typedef struct chc_model chc_model;
typedef struct chc_placement chc_placement;
typedef struct chc_trace chc_trace;

CHC_API const char* chc_version(void);
CHC_API const char* chc_last_error(void);
CHC_API void chc_string_free(char* s);

/* Experiment configs (JSON). */
CHC_API chc_status chc_config_load(const char* path, chc_config** out);
CHC_API chc_status chc_config_parse(const char* json_text, chc_config** out);
/* Keys: mode, policy, placement, seed, trace, split, threads, capacity,
 * cloud_ratio. */
CHC_API chc_status chc_config_set(chc_config* config, const char* key,
                                  const char* value);
CHC_API void chc_config_free(chc_config* config);

/* report receives "valid" or one problem per line. Returns
 * CHC_ERR_VALIDATION when the config is invalid. */
CHC_API chc_status chc_validate(const chc_config* config, char** report);
/* csv (optional) receives the header line and one row. */
CHC_API chc_status chc_run(const chc_config* config, chc_metrics* metrics,
                           char** csv);
/* Comma-separated lists; NULL or "" falls back to the config's single
 * value. Capacities accept byte counts, B/KB/MB/GB/TB suffixes or a
 * percentage of catalog bytes. */
CHC_API chc_status chc_sweep(const chc_config* config, const char* capacities,
                             const char* modes, const char* placements,
                             const char* policies, char** csv);
CHC_API chc_status chc_gen_trace(const chc_config* config, char** csv);
CHC_API chc_status chc_oracle(uint64_t seed, uint32_t instances,
                              chc_oracle_report* report);

/* Models. Arrays have num_cells or num_files entries. */
CHC_API chc_status chc_model_create(
    uint32_t num_cells, const uint64_t* edge_capacity, uint64_t cloud_capacity,
    const uint64_t* users_per_cell, const double* fronthaul_ms,
    double origin_ms, uint32_t num_files, const uint64_t* file_size,
    const double* popularity, chc_model** out);
CHC_API chc_status chc_model_from_config(const chc_config* config,
                                         chc_model** out);
CHC_API void chc_model_free(chc_model* model);

/* Placements. */
CHC_API chc_status chc_placement_compute(const chc_model* model, chc_mode mode,
                                         chc_placement_algorithm algorithm,
                                         chc_placement** out);
CHC_API chc_status chc_placement_parse(const chc_model* model, const char* text,
                                       chc_placement** out);
CHC_API chc_status chc_placement_format(const chc_placement* placement,
                                        char** text);
CHC_API chc_status chc_placement_saving(const chc_model* model,
                                        const chc_placement* placement,
                                        chc_mode mode, double* saving);
CHC_API void chc_placement_free(chc_placement* placement);

/* Traces. */
CHC_API chc_status chc_trace_load(const chc_model* model, const char* path,
                                  chc_trace** out);
CHC_API chc_status chc_trace_generate(const chc_model* model,
                                      uint64_t requests, double zipf_exponent,
                                      uint64_t seed, chc_trace** out);
CHC_API chc_status chc_trace_save(const chc_trace* trace, const char* path);
CHC_API size_t chc_trace_size(const chc_trace* trace);
CHC_API void chc_trace_free(chc_trace* trace);

/* Replays the trace. initial may be NULL for empty caches. */
CHC_API chc_status chc_simulate(const chc_model* model, const chc_trace* trace,
                                const chc_placement* initial, chc_mode mode,
                                chc_policy policy, chc_metrics* metrics);

#ifdef __cplusplus
}
#endif

#endif /* CHC_CHC_H_ */
