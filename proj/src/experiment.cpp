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

#include "chc/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <filesystem>
#include <functional>
#include <fstream>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include "chc/error.hpp"
#include "json.hpp"
#include "text_util.hpp"

namespace chc {

namespace {

using nlohmann::json;

[[noreturn]] void config_error(const std::string& what) {
  throw Error(ErrorCode::kParse, "config: " + what);
}

std::string resolve_path(const std::string& path, const std::string& base_dir) {
  if (path.empty() || base_dir.empty()) return path;
  std::filesystem::path p(path);
  if (p.is_absolute()) return path;
  return (std::filesystem::path(base_dir) / p).string();
}

// Byte count from a JSON number or a capacity string without percentages.
Bytes bytes_field(const json& value, const std::string& name) {
  if (value.is_number_unsigned() || value.is_number_integer()) {
    const auto v = value.get<std::int64_t>();
    if (v < 0) config_error(name + " must be nonnegative");
    return static_cast<Bytes>(v);
  }
  if (value.is_number_float()) {
    const auto v = value.get<double>();
    if (!(v >= 0)) config_error(name + " must be nonnegative");
    return static_cast<Bytes>(std::llround(v));
  }
  if (value.is_string()) {
    const auto s = value.get<std::string>();
    if (!s.empty() && s.back() == '%') config_error(name + " cannot be a percentage");
    return parse_capacity(s, 0);
  }
  config_error(name + " must be a number or a size string");
}

template <typename T>
T get_or(const json& obj, const char* key, T fallback) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    config_error(std::string("field '") + key + "' has the wrong type");
  }
}

PopularitySource parse_popularity_source(std::string_view s) {
  if (s == "trace") return PopularitySource::kTrace;
  if (s == "zipf") return PopularitySource::kZipf;
  if (s == "uniform") return PopularitySource::kUniform;
  if (s == "file") return PopularitySource::kFile;
  config_error("unknown popularity source '" + std::string(s) +
               "' (expected trace|zipf|uniform|file)");
}

void wrap_enum_errors(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kInvalidArgument) config_error(e.what());
    throw;
  }
}

Topology base_topology(const ExperimentConfig& config) {
  Topology t;
  t.num_cells = config.num_cells;
  t.users_per_cell = config.users_per_cell;
  t.edge_capacity = config.edge_capacity;
  if (t.edge_capacity.empty()) t.edge_capacity.assign(config.num_cells, 0);
  t.cloud_capacity = config.cloud_capacity;
  return t;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

PlacementChoice PlacementChoice::parse(std::string_view text) {
  if (text == "none") return {true, PlacementAlgorithm::kPcd};
  return {false, parse_placement_algorithm(text)};
}

std::string_view PlacementChoice::name() const {
  return none ? std::string_view("none") : to_string(algorithm);
}

Bytes parse_capacity(std::string_view input, Bytes catalog_bytes) {
  auto s = text::trim(input);
  if (s.empty()) throw Error(ErrorCode::kInvalidArgument, "empty capacity");
  long double scale = 1;
  bool percent = false;
  struct Unit {
    std::string_view suffix;
    long double scale;
  };
  static constexpr Unit kUnits[] = {{"TB", 1e12L}, {"GB", 1e9L}, {"MB", 1e6L},
                                    {"KB", 1e3L},  {"B", 1.0L}};
  if (s.back() == '%') {
    percent = true;
    s.remove_suffix(1);
  } else {
    for (const auto& u : kUnits) {
      if (s.size() > u.suffix.size() && s.substr(s.size() - u.suffix.size()) == u.suffix) {
        scale = u.scale;
        s.remove_suffix(u.suffix.size());
        break;
      }
    }
  }
  const auto value = text::parse_double(text::trim(s));
  if (!value || !(*value >= 0) || !std::isfinite(*value)) {
    throw Error(ErrorCode::kInvalidArgument, "bad capacity '" + std::string(input) + "'");
  }
  long double bytes = percent ? static_cast<long double>(*value) / 100.0L *
                                    static_cast<long double>(catalog_bytes)
                              : static_cast<long double>(*value) * scale;
  return static_cast<Bytes>(std::llround(bytes));
}

std::vector<Bytes> parse_capacity_list(std::string_view input, Bytes catalog_bytes) {
  std::vector<Bytes> out;
  for (auto item : text::split(input, ',')) {
    item = text::trim(item);
    if (item.empty()) continue;
    out.push_back(parse_capacity(item, catalog_bytes));
  }
  if (out.empty()) throw Error(ErrorCode::kInvalidArgument, "empty capacity list");
  return out;
}

ExperimentConfig parse_config(std::string_view json_text, const std::string& base_dir) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    config_error(std::string("invalid JSON: ") + e.what());
  }
  if (!root.is_object()) config_error("top level must be an object");

  ExperimentConfig c;
  const json empty = json::object();
  const auto& topo = root.contains("topology") ? root.at("topology") : empty;
  c.num_cells = get_or<std::uint32_t>(topo, "num_cells", 0);
  if (topo.contains("users_per_cell")) {
    c.users_per_cell = get_or<std::vector<std::uint64_t>>(topo, "users_per_cell", {});
  } else {
    c.users_per_cell =
        round_robin_users(get_or<std::uint64_t>(topo, "users", c.num_cells), c.num_cells);
  }
  if (topo.contains("total_capacity")) {
    const auto& v = topo.at("total_capacity");
    c.total_capacity = v.is_string() ? v.get<std::string>() : v.dump();
  }
  if (topo.contains("edge_capacity")) {
    const auto& v = topo.at("edge_capacity");
    if (v.is_array()) {
      for (const auto& e : v) c.edge_capacity.push_back(bytes_field(e, "edge_capacity"));
    } else {
      c.edge_capacity.assign(c.num_cells, bytes_field(v, "edge_capacity"));
    }
  }
  if (topo.contains("cloud_capacity")) {
    c.cloud_capacity = bytes_field(topo.at("cloud_capacity"), "cloud_capacity");
  }
  c.cloud_ratio = get_or<double>(topo, "cloud_ratio", 4.0);

  const auto& cost = root.contains("cost") ? root.at("cost") : empty;
  if (cost.contains("fronthaul_ms")) {
    const auto& v = cost.at("fronthaul_ms");
    if (v.is_array()) {
      c.cost.fronthaul = get_or<std::vector<double>>(cost, "fronthaul_ms", {});
    } else {
      c.cost.fronthaul.assign(c.num_cells, get_or<double>(cost, "fronthaul_ms", 0));
    }
  }
  c.cost.origin = get_or<double>(cost, "origin_ms", 0);

  const auto& cat = root.contains("catalog") ? root.at("catalog") : empty;
  if (cat.contains("num_files")) c.num_files = get_or<FileIndex>(cat, "num_files", 0);
  if (cat.contains("file_size")) c.file_size = bytes_field(cat.at("file_size"), "file_size");
  c.popularity = parse_popularity_source(get_or<std::string>(cat, "popularity", "trace"));
  c.zipf_exponent = get_or<double>(cat, "zipf_exponent", 0.8);
  c.catalog_path = resolve_path(get_or<std::string>(cat, "path", ""), base_dir);

  if (root.contains("trace")) {
    const auto& tr = root.at("trace");
    c.trace_path = resolve_path(get_or<std::string>(tr, "path", ""), base_dir);
    if (tr.contains("synthetic")) {
      const auto& syn = tr.at("synthetic");
      c.synthetic_requests = get_or<std::uint64_t>(syn, "requests", 0);
      c.synthetic_exponent = get_or<double>(syn, "zipf_exponent", 0.8);
    }
  }

  wrap_enum_errors([&] {
    c.mode = parse_mode(get_or<std::string>(root, "mode", "chc"));
    c.placement = PlacementChoice::parse(get_or<std::string>(root, "placement", "pcd"));
    c.policy = parse_policy(get_or<std::string>(root, "policy", "static"));
  });
  if (root.contains("rcr")) {
    const auto& rcr = root.at("rcr");
    const auto pop = get_or<std::string>(rcr, "popularity", "apriori");
    if (pop == "apriori") {
      c.rcr.popularity = RcrOptions::Popularity::kApriori;
    } else if (pop == "empirical") {
      c.rcr.popularity = RcrOptions::Popularity::kEmpirical;
    } else {
      config_error("rcr.popularity must be apriori|empirical");
    }
    c.rcr.decay = get_or<double>(rcr, "decay", 0.999);
  }
  c.seed = get_or<std::uint64_t>(root, "seed", 1);
  c.split = get_or<double>(root, "split", 0.0);
  c.threads = get_or<unsigned>(root, "threads", 0);
  if (!(c.split >= 0 && c.split < 1)) config_error("split must be in [0, 1)");
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  const auto text = read_file(path);
  return parse_config(text, std::filesystem::path(path).parent_path().string());
}

void apply_override(ExperimentConfig& c, std::string_view key, std::string_view value) {
  const auto bad = [&] {
    return Error(ErrorCode::kInvalidArgument,
                 "bad value '" + std::string(value) + "' for " + std::string(key));
  };
  if (key == "mode") {
    c.mode = parse_mode(value);
  } else if (key == "policy") {
    c.policy = parse_policy(value);
  } else if (key == "placement") {
    c.placement = PlacementChoice::parse(value);
  } else if (key == "seed") {
    const auto v = text::parse_u64(value);
    if (!v) throw bad();
    c.seed = *v;
  } else if (key == "trace") {
    c.trace_path = std::string(value);
  } else if (key == "split") {
    const auto v = text::parse_double(value);
    if (!v || !(*v >= 0 && *v < 1)) throw bad();
    c.split = *v;
  } else if (key == "threads") {
    const auto v = text::parse_u64(value);
    if (!v) throw bad();
    c.threads = static_cast<unsigned>(*v);
  } else if (key == "capacity") {
    c.total_capacity = std::string(value);
  } else if (key == "cloud_ratio") {
    const auto v = text::parse_double(value);
    if (!v || !(*v >= 0)) throw bad();
    c.cloud_ratio = *v;
  } else {
    throw Error(ErrorCode::kInvalidArgument, "unknown override '" + std::string(key) + "'");
  }
}

Bytes Workload::catalog_bytes() const {
  Bytes total = 0;
  for (auto s : model.catalog.file_size) total += s;
  return total;
}

RequestTrace generate_trace(const ExperimentConfig& config) {
  if (!config.num_files) {
    throw Error(ErrorCode::kInvalidArgument,
                "synthetic trace needs catalog.num_files");
  }
  if (config.synthetic_requests == 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "synthetic trace needs trace.synthetic.requests > 0");
  }
  return generate_zipf_trace(config.synthetic_requests, *config.num_files,
                             config.synthetic_exponent, base_topology(config),
                             config.seed);
}

Workload prepare_workload(const ExperimentConfig& config) {
  if (config.num_cells == 0) {
    throw Error(ErrorCode::kValidation, "num_cells must be at least 1");
  }
  Workload w;
  if (!config.trace_path.empty()) {
    w.trace = load_trace(config.trace_path, config.num_cells, config.num_files);
  } else if (config.synthetic_requests > 0) {
    w.trace = generate_trace(config);
  }
  FileIndex F = config.num_files.value_or(inferred_num_files(w.trace));

  const auto parts = split_trace(w.trace, config.split);
  w.replay = parts.replay;

  auto& catalog = w.model.catalog;
  switch (config.popularity) {
    case PopularitySource::kTrace:
      if (w.trace.empty()) {
        throw Error(ErrorCode::kInvalidArgument,
                    "popularity source 'trace' needs a nonempty trace");
      }
      catalog = Catalog::uniform(estimate_popularity(parts.estimation, F), config.file_size);
      break;
    case PopularitySource::kZipf:
      catalog = Catalog::uniform(zipf_popularity(F, config.zipf_exponent), config.file_size);
      break;
    case PopularitySource::kUniform:
      catalog = Catalog::uniform(std::vector<double>(F, F ? 1.0 / F : 0.0), config.file_size);
      break;
    case PopularitySource::kFile:
      catalog = read_catalog_csv(read_file(config.catalog_path));
      if (config.num_files && catalog.num_files() != *config.num_files) {
        throw Error(ErrorCode::kValidation,
                    "catalog file has a different number of files than num_files");
      }
      break;
  }
  for (const auto& r : w.trace) {
    if (r.file >= catalog.num_files()) {
      throw Error(ErrorCode::kValidation,
                  "trace seq " + std::to_string(r.seq) + " references file " +
                      std::to_string(r.file + 1) + " outside the catalog");
    }
  }

  Topology topo = base_topology(config);
  if (!config.total_capacity.empty()) {
    topo = split_total_capacity(topo, parse_capacity(config.total_capacity, w.catalog_bytes()),
                                config.cloud_ratio);
  }
  w.model.topology = std::move(topo);
  w.model.cost = config.cost;
  require_valid(w.model);
  return w;
}

RunRow run_point(const Workload& workload, const Topology& capacities,
                 ArchitectureMode mode, PlacementChoice placement, PolicyKind policy,
                 const RcrOptions& rcr) {
  Model model = workload.model;
  model.topology = capacities;
  CachePlacement initial =
      placement.none
          ? CachePlacement(architecture_topology(capacities, mode), model.catalog)
          : compute_placement(model, mode, placement.algorithm);
  auto replacement = make_policy(policy, model, mode, rcr);
  auto result = run_simulation(workload.replay, std::move(initial), *replacement, model, mode);
  return {mode, policy, placement, capacities.total_capacity(), std::move(result.metrics)};
}

RunRow run_experiment(const ExperimentConfig& config, const Workload& workload) {
  return run_point(workload, workload.model.topology, config.mode, config.placement,
                   config.policy, config.rcr);
}

std::vector<RunRow> run_sweep(const ExperimentConfig& config, const Workload& workload,
                              const SweepRequest& sweep) {
  struct Point {
    Bytes capacity;
    ArchitectureMode mode;
    PlacementChoice placement;
    PolicyKind policy;
  };
  std::vector<Point> points;
  for (auto cap : sweep.capacities) {
    for (auto mode : sweep.modes) {
      for (const auto& placement : sweep.placements) {
        for (auto policy : sweep.policies) points.push_back({cap, mode, placement, policy});
      }
    }
  }
  std::vector<RunRow> rows(points.size());
  unsigned width = config.threads ? config.threads : std::thread::hardware_concurrency();
  width = std::max(1u, std::min<unsigned>(width, static_cast<unsigned>(points.size())));

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    while (true) {
      const auto i = next.fetch_add(1);
      if (i >= points.size()) return;
      try {
        const auto& p = points[i];
        const auto caps = split_total_capacity(workload.model.topology, p.capacity,
                                               config.cloud_ratio);
        rows[i] = run_point(workload, caps, p.mode, p.placement, p.policy, config.rcr);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < width; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return rows;
}

std::string csv_header() {
  return "mode,policy,total_capacity_bytes,hit_ratio,avg_latency_ms,backhaul_bytes,"
         "hits_local,hits_cloud,hits_neighbor,misses,placement";
}

std::string csv_row(const RunRow& row) {
  const auto& t = row.metrics.total;
  std::string out;
  out += to_string(row.mode);
  out += ',';
  out += to_string(row.policy);
  out += ',' + std::to_string(row.total_capacity);
  out += ',' + text::format_double(t.hit_ratio());
  out += ',' + text::format_double(t.avg_latency());
  out += ',' + std::to_string(t.backhaul_bytes);
  out += ',' + std::to_string(t.hits_local);
  out += ',' + std::to_string(t.hits_cloud);
  out += ',' + std::to_string(t.hits_neighbor);
  out += ',' + std::to_string(t.misses);
  out += ',';
  out += row.placement.name();
  return out;
}

std::string to_csv(std::span<const RunRow> rows) {
  std::string out = csv_header() + "\n";
  for (const auto& r : rows) out += csv_row(r) + "\n";
  return out;
}

ValidationReport validate_config(const ExperimentConfig& config) {
  ValidationReport report;
  try {
    Workload w = prepare_workload(config);
    (void)w;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kValidation) {
      // require_valid joins the individual problems with "; ".
      std::string_view rest = e.what();
      while (!rest.empty()) {
        const auto pos = rest.find("; ");
        report.errors.emplace_back(rest.substr(0, pos));
        if (pos == std::string_view::npos) break;
        rest.remove_prefix(pos + 2);
      }
    } else {
      report.errors.emplace_back(e.what());
    }
  }
  return report;
}

OracleInstance random_oracle_instance(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto below = [&](std::uint64_t n) { return rng() % n; };
  auto unit = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };

  OracleInstance inst;
  inst.seed = seed;
  auto& m = inst.model;
  const auto R = static_cast<std::uint32_t>(1 + below(3));
  const auto F = static_cast<FileIndex>(2 + below(7));

  m.topology.num_cells = R;
  m.topology.users_per_cell.resize(R);
  for (auto& u : m.topology.users_per_cell) u = below(6);
  if (m.topology.total_users() == 0) m.topology.users_per_cell[0] = 1;
  m.topology.edge_capacity.resize(R);
  for (auto& c : m.topology.edge_capacity) c = below(5);
  m.topology.cloud_capacity = below(5);

  m.cost.fronthaul.resize(R);
  for (auto& d : m.cost.fronthaul) d = static_cast<double>(1 + below(40));
  const double max_d = *std::max_element(m.cost.fronthaul.begin(), m.cost.fronthaul.end());
  m.cost.origin = max_d + 1 + static_cast<double>(below(100));

  std::vector<double> w(F);
  double total = 0;
  for (auto& v : w) {
    const double u = unit();
    v = 0.01 + u * u * u;
    total += v;
  }
  for (auto& v : w) v /= total;
  m.catalog = Catalog::uniform(std::move(w), 1);
  return inst;
}

std::string OracleReport::to_string() const {
  std::ostringstream out;
  out << "instances=" << instances << " min_ratio=" << text::format_double(min_ratio)
      << " mean_ratio=" << text::format_double(mean_ratio) << " worst_seed=" << worst_seed
      << " seconds=" << seconds;
  return out.str();
}

OracleReport run_oracle(std::uint64_t seed, std::uint32_t instances) {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 seeds(seed);
  OracleReport report;
  report.instances = instances;
  double sum = 0;
  for (std::uint32_t k = 0; k < instances; ++k) {
    const auto inst = random_oracle_instance(seeds());
    const auto mode = ArchitectureMode::kChc;
    const double greedy = delay_saving(pcd_greedy(inst.model, mode), inst.model, mode);
    const double best =
        delay_saving(brute_force_optimal(inst.model, mode), inst.model, mode);
    const double ratio = best > 0 ? greedy / best : 1.0;
    sum += ratio;
    if (k == 0 || ratio < report.min_ratio) {
      report.min_ratio = ratio;
      report.worst_seed = inst.seed;
    }
  }
  report.mean_ratio = instances ? sum / instances : 1.0;
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace chc
