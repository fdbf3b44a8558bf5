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


// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "chc/error.hpp"
#include "chc/experiment.hpp"
#include "test_support.hpp"

namespace chc {
namespace {

const std::string kConfigDir = CHC_TEST_CONFIG_DIR;

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

// 1. Greedy reaches half the optimum on every small instance.
Outcome greedy_guarantee() {
  Stopwatch clock;
  const auto report = run_oracle(20260101, 200);
  const double secs = clock.seconds();
  Outcome o;
  o.pass = report.instances >= 200 && report.min_ratio >= 0.5 &&
           report.mean_ratio >= 0.95 && secs < 60;
  o.detail = "instances=" + std::to_string(report.instances) +
             " min=" + fmt("%.6f", report.min_ratio) +
             " mean=" + fmt("%.6f", report.mean_ratio) +
             " worst_seed=" + std::to_string(report.worst_seed) +
             " time=" + fmt("%.2fs", secs);
  return o;
}

// 2. Monotonicity and diminishing returns on random (A, B, e) triples.
Outcome submodularity() {
  Stopwatch clock;
  std::mt19937_64 rng(424242);
  std::uint64_t triples = 0, violations = 0;
  const double tol = 1e-9;
  const ArchitectureMode modes[] = {ArchitectureMode::kChc, ArchitectureMode::kNonCoop,
                                    ArchitectureMode::kEdgeOnly,
                                    ArchitectureMode::kCloudOnly};
  while (triples < 4000) {
    testing::RandomModelSpec spec;
    spec.max_cells = 4;
    spec.max_files = 8;
    const auto m = testing::unbounded(testing::random_model(rng, spec));
    const auto mode = modes[rng() % 4];
    const auto b = testing::random_placement(rng, m, testing::unit(rng));
    CachePlacement a(m.topology, m.catalog);
    for (std::uint32_t s = 0; s < b.num_slots(); ++s) {
      for (auto f : b.files(CacheId::from_slot(s))) {
        if (testing::unit(rng) < 0.5) a.insert(CacheId::from_slot(s), f);
      }
    }
    const double sa = delay_saving(a, m, mode);
    const double sb = delay_saving(b, m, mode);
    const double scale = std::max(1.0, sb);
    // Cross-check the library objective against the per-user enumeration.
    if (std::abs(sb - testing::oracle_saving(b, m, mode)) > tol * scale) ++violations;
    const auto cache = CacheId::from_slot(rng() % b.num_slots());
    const auto file = static_cast<FileIndex>(rng() % m.catalog.num_files());
    if (b.contains(cache, file)) continue;
    ++triples;
    if (sa > sb + tol * scale) ++violations;
    const double ga = marginal_gain(a, file, cache, m, mode);
    const double gb = marginal_gain(b, file, cache, m, mode);
    if (gb > ga + tol * scale) ++violations;
    auto bb = b;
    bb.insert(cache, file);
    if (std::abs(testing::oracle_saving(bb, m, mode) - sb - gb) > tol * scale) {
      ++violations;
    }
  }
  const double secs = clock.seconds();
  return {violations == 0 && secs < 30,
          "triples=" + std::to_string(triples) +
              " violations=" + std::to_string(violations) + " time=" + fmt("%.2fs", secs)};
}

// 3. Replaying a trace whose counts are exactly users * p gives the
// analytic expected delay.
Outcome analytic_consistency() {
  Model m;
  m.topology.num_cells = 4;
  m.topology.users_per_cell = round_robin_users(11, 4);
  m.cost.fronthaul = {20, 20, 20, 20};
  m.cost.origin = 100;
  const FileIndex F = 200;
  std::vector<std::uint64_t> counts(F);
  std::uint64_t total = 0;
  for (FileIndex i = 0; i < F; ++i) {
    counts[i] = static_cast<std::uint64_t>(std::floor(600.0 / std::pow(i + 1.0, 0.8)));
    total += counts[i];
  }
  std::vector<double> p(F);
  for (FileIndex i = 0; i < F; ++i) p[i] = static_cast<double>(counts[i]) / total;
  m.catalog = Catalog::uniform(p, 20 * kMegabyte);
  m.topology = split_total_capacity(m.topology, 20 * 20 * kMegabyte, 4);

  // Interleave cells and files so the order is not trivially blocked.
  RequestTrace trace;
  std::uint64_t seq = 0;
  for (FileIndex i = 0; i < F; ++i) {
    for (std::uint64_t k = 0; k < counts[i]; ++k) {
      for (CellIndex r = 0; r < 4; ++r) {
        for (std::uint64_t u = 0; u < m.topology.users_per_cell[r]; ++u) {
          trace.push_back({++seq, r, i, ""});
        }
      }
    }
  }
  std::mt19937_64 rng(3);
  std::shuffle(trace.begin(), trace.end(), rng);
  for (std::uint64_t k = 0; k < trace.size(); ++k) trace[k].seq = k + 1;

  double worst = 0;
  for (auto mode : {ArchitectureMode::kChc, ArchitectureMode::kNonCoop,
                    ArchitectureMode::kEdgeOnly, ArchitectureMode::kCloudOnly}) {
    const auto placement = compute_placement(m, mode, PlacementAlgorithm::kPcd);
    StaticPolicy policy;
    const auto result = run_simulation(trace, placement, policy, m, mode);
    const double predicted = total_expected_delay(placement, m, mode) /
                             static_cast<double>(m.topology.total_users());
    worst = std::max(worst,
                     std::abs(result.metrics.avg_latency() - predicted) / predicted);
  }
  return {worst <= 1e-9, "requests=" + std::to_string(trace.size()) +
                             " max_rel_error=" + fmt("%.3g", worst)};
}

struct Sweep {
  std::vector<RunRow> rows;
  std::vector<Bytes> capacities;
  double seconds = 0;
};

ExperimentConfig zipf_config() { return load_config(kConfigDir + "/zipf_synthetic.json"); }

Sweep sweep_zipf(const ExperimentConfig& config, const Workload& w,
                 std::vector<ArchitectureMode> modes,
                 std::vector<PlacementChoice> placements,
                 std::vector<PolicyKind> policies) {
  Stopwatch clock;
  SweepRequest req;
  req.capacities = parse_capacity_list("1%,2%,5%,10%", w.catalog_bytes());
  req.modes = std::move(modes);
  req.placements = std::move(placements);
  req.policies = std::move(policies);
  Sweep s;
  s.rows = run_sweep(config, w, req);
  s.capacities = req.capacities;
  s.seconds = clock.seconds();
  return s;
}

// 4. Architecture ordering on the synthetic Zipf workload.
Outcome architecture_ordering(const ExperimentConfig& config, const Workload& w) {
  const auto s = sweep_zipf(config, w,
                            {ArchitectureMode::kChc, ArchitectureMode::kNonCoop,
                             ArchitectureMode::kEdgeOnly, ArchitectureMode::kCloudOnly},
                            {PlacementChoice::parse("pcd")}, {PolicyKind::kStatic});
  bool ok = s.seconds < 300;
  std::string detail;
  for (std::size_t k = 0; k < s.capacities.size(); ++k) {
    const auto& chc = s.rows[k * 4 + 0].metrics;
    const auto& nc = s.rows[k * 4 + 1].metrics;
    const auto& eo = s.rows[k * 4 + 2].metrics;
    const auto& co = s.rows[k * 4 + 3].metrics;
    ok = ok && chc.hit_ratio() >= nc.hit_ratio() && nc.hit_ratio() >= eo.hit_ratio();
    ok = ok && chc.total.backhaul_bytes <= nc.total.backhaul_bytes &&
         nc.total.backhaul_bytes <= eo.total.backhaul_bytes;
    ok = ok && chc.avg_latency() < co.avg_latency();
    detail += " [" + std::to_string(k) + "] hit " + fmt("%.4f", chc.hit_ratio()) + "/" +
              fmt("%.4f", nc.hit_ratio()) + "/" + fmt("%.4f", eo.hit_ratio()) +
              " lat " + fmt("%.2f", chc.avg_latency()) + "<" +
              fmt("%.2f", co.avg_latency());
  }
  return {ok, "capacities=1%,2%,5%,10%" + detail + " time=" + fmt("%.1fs", s.seconds)};
}

// 5. Greedy placement with reactive replacement beats the baselines.
Outcome policy_ordering(const ExperimentConfig& config, const Workload& w) {
  const auto s = sweep_zipf(config, w, {ArchitectureMode::kChc},
                            {PlacementChoice::parse("pcd"), PlacementChoice::parse("mpcex"),
                             PlacementChoice::parse("femtox"),
                             PlacementChoice::parse("none")},
                            {PolicyKind::kRcr, PolicyKind::kStatic, PolicyKind::kLru});
  // Rows per capacity: placement-major, policy-minor.
  auto at = [&](std::size_t k, std::size_t placement, std::size_t policy) {
    return s.rows[k * 12 + placement * 3 + policy].metrics.hit_ratio();
  };
  bool ok = true;
  std::string detail;
  for (std::size_t k = 0; k < s.capacities.size(); ++k) {
    const double ours = at(k, 0, 0);
    const double mpc = at(k, 1, 1), femto = at(k, 2, 1), lru = at(k, 3, 2);
    ok = ok && ours >= mpc && ours >= femto && ours >= lru;
    detail += " [" + std::to_string(k) + "] " + fmt("%.4f", ours) + " vs mpcex " +
              fmt("%.4f", mpc) + " femtox " + fmt("%.4f", femto) + " lru " +
              fmt("%.4f", lru);
  }
  return {ok, detail.substr(1) + " time=" + fmt("%.1fs", s.seconds)};
}

// 6. Accounting identities after every request, for every policy.
Outcome accounting() {
  Stopwatch clock;
  std::mt19937_64 rng(66);
  Model m;
  m.topology.num_cells = 4;
  m.topology.users_per_cell = round_robin_users(1000, 4);
  m.cost.fronthaul = {12, 20, 27, 35};
  m.cost.origin = 100;
  const FileIndex F = 2000;
  m.catalog.popularity = zipf_popularity(F, 0.8);
  for (FileIndex i = 0; i < F; ++i) m.catalog.file_size.push_back(1 + rng() % 50);
  Bytes catalog_bytes = 0;
  for (auto b : m.catalog.file_size) catalog_bytes += b;
  m.topology = split_total_capacity(m.topology, catalog_bytes / 20, 4);
  const auto trace = generate_zipf_trace(100'000, F, 0.8, m.topology, 5);

  std::uint64_t checks = 0, failures = 0;
  for (auto mode : {ArchitectureMode::kChc, ArchitectureMode::kNonCoop,
                    ArchitectureMode::kEdgeOnly, ArchitectureMode::kCloudOnly}) {
    for (auto kind : {PolicyKind::kRcr, PolicyKind::kLru, PolicyKind::kStatic}) {
      Counters mine;
      Bytes miss_bytes = 0;
      SimulationOptions opt;
      opt.check_invariants = true;
      opt.observer = [&](const Request& req, const ServingDecision& d,
                         const Metrics& got) {
        ++mine.total_requests;
        if (d.source.is_origin()) {
          ++mine.misses;
          miss_bytes += m.catalog.file_size[req.file];
        } else if (d.local_hit) {
          ++mine.hits_local;
        } else if (d.source.is_cloud()) {
          ++mine.hits_cloud;
        } else {
          ++mine.hits_neighbor;
        }
        const auto& t = got.total;
        ++checks;
        const bool ok =
            t.hits_local + t.hits_cloud + t.hits_neighbor + t.misses == t.total_requests &&
            t.total_requests == mine.total_requests && t.misses == mine.misses &&
            t.hits_local == mine.hits_local && t.hits_cloud == mine.hits_cloud &&
            t.hits_neighbor == mine.hits_neighbor && t.backhaul_bytes == miss_bytes &&
            std::abs(t.hit_ratio() -
                     (1 - static_cast<double>(t.misses) / t.total_requests)) < 1e-15;
        if (!ok) ++failures;
      };
      const auto start = compute_placement(m, mode, PlacementAlgorithm::kPcd);
      auto policy = make_policy(kind, m, mode);
      try {
        run_simulation(trace, start, *policy, m, mode, opt);
      } catch (const Error&) {
        ++failures;
      }
    }
  }
  return {failures == 0, "requests=100000 runs=12 checks=" + std::to_string(checks) +
                             " failures=" + std::to_string(failures) +
                             " time=" + fmt("%.1fs", clock.seconds())};
}

// 7. Identical CSV across repeated runs and thread counts.
Outcome determinism() {
  Stopwatch clock;
  auto config = load_config(kConfigDir + "/small.json");
  SweepRequest req;
  const auto w = prepare_workload(config);
  req.capacities = parse_capacity_list("1%,2%,5%,10%", w.catalog_bytes());
  req.modes = {ArchitectureMode::kChc, ArchitectureMode::kNonCoop,
               ArchitectureMode::kEdgeOnly, ArchitectureMode::kCloudOnly};
  req.placements = {PlacementChoice::parse("pcd"), PlacementChoice::parse("none")};
  req.policies = {PolicyKind::kRcr, PolicyKind::kLru, PolicyKind::kStatic};
  config.threads = 1;
  const auto serial = to_csv(run_sweep(config, w, req));
  config.threads = 4;
  const auto parallel = to_csv(run_sweep(config, prepare_workload(config), req));
  const auto again = to_csv(run_sweep(config, prepare_workload(config), req));
  const auto single_a = csv_row(run_experiment(config, w));
  const auto single_b = csv_row(run_experiment(config, prepare_workload(config)));
  const bool ok = serial == parallel && parallel == again && single_a == single_b;
  return {ok, "rows=" + std::to_string(req.capacities.size() * 4 * 2 * 3) +
                  " bytes=" + std::to_string(serial.size()) +
                  " time=" + fmt("%.1fs", clock.seconds())};
}

// 8. Full-size catalog: lazy greedy and replay wall-clock limits.
Outcome scale() {
  const auto config = load_config(kConfigDir + "/campus.json");
  const auto w = prepare_workload(config);
  Stopwatch place_clock;
  const auto placement = pcd_greedy(w.model, ArchitectureMode::kChc, {.lazy = true});
  const double place_secs = place_clock.seconds();
  RcrPolicy policy(w.model, ArchitectureMode::kChc);
  Stopwatch replay_clock;
  const auto result =
      run_simulation(w.replay, placement, policy, w.model, ArchitectureMode::kChc);
  const double replay_secs = replay_clock.seconds();
  const bool ok = place_secs < 120 && replay_secs < 10 &&
                  w.model.catalog.num_files() == 77414 && w.replay.size() == 122280;
  return {ok, "files=" + std::to_string(w.model.catalog.num_files()) +
                  " placement=" + fmt("%.2fs", place_secs) +
                  " replay=" + fmt("%.2fs", replay_secs) + " requests=" +
                  std::to_string(result.metrics.total.total_requests) +
                  " hit_ratio=" + fmt("%.4f", result.metrics.hit_ratio())};
}

}  // namespace
}  // namespace chc

int main() {
  using chc::Outcome;
  int failed = 0;
  auto report = [&](int id, const char* name, const std::function<Outcome()>& fn) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    std::printf("[%s] %d %s: %s\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failed;
  };

  report(1, "greedy within half of optimum", chc::greedy_guarantee);
  report(2, "monotone submodular objective", chc::submodularity);
  report(3, "replayed latency matches expected delay", chc::analytic_consistency);

  std::optional<chc::ExperimentConfig> config;
  std::optional<chc::Workload> workload;
  try {
    config = chc::zipf_config();
    workload = chc::prepare_workload(*config);
  } catch (const std::exception& e) {
    std::printf("workload setup failed: %s\n", e.what());
  }
  report(4, "architecture ordering", [&] {
    if (!workload) return Outcome{false, "no workload"};
    return chc::architecture_ordering(*config, *workload);
  });
  report(5, "replacement policy ordering", [&] {
    if (!workload) return Outcome{false, "no workload"};
    return chc::policy_ordering(*config, *workload);
  });
  workload.reset();

  report(6, "metrics accounting identities", chc::accounting);
  report(7, "deterministic CSV output", chc::determinism);
  report(8, "full-size catalog runtime", chc::scale);

  std::printf("%d of 8 criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
