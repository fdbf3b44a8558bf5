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

// chc: experiment runner. Links only the C API.
//
//   chc run       --config cfg.json [--mode M] [--policy P] [--placement A] ...
//   chc sweep     --config cfg.json --capacities 1%,2%,5% [--mode chc,edgeonly]
//   chc gen-trace --config cfg.json [--seed N] [--out trace.csv]
//   chc validate  --config cfg.json
//   chc oracle    [--config cfg.json] [--seed N] [--instances 200]

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>

#include "CLI11.hpp"
#include "chc/chc.h"

namespace {

struct ConfigDeleter {
  void operator()(chc_config* c) const { chc_config_free(c); }
};
using ConfigPtr = std::unique_ptr<chc_config, ConfigDeleter>;

struct Options {
  std::string config;
  std::string trace;
  std::string capacities;
  std::string mode;
  std::string policy;
  std::string placement;
  std::string split;
  std::string out;
  std::uint64_t seed = 0;
  bool seed_given = false;
  unsigned threads = 0;
  std::uint32_t instances = 200;
};

int fail(const char* context) {
  std::cerr << "chc: " << context << ": " << chc_last_error() << "\n";
  return 1;
}

bool emit(const Options& opt, const std::string& text) {
  if (opt.out.empty()) {
    std::cout << text;
    return static_cast<bool>(std::cout.flush());
  }
  std::ofstream out(opt.out, std::ios::binary);
  out << text;
  if (!out) {
    std::cerr << "chc: cannot write '" << opt.out << "'\n";
    return false;
  }
  return true;
}

// Owns a string returned by the C API.
std::string take(char* s) {
  std::string out = s ? s : "";
  chc_string_free(s);
  return out;
}

ConfigPtr open_config(const Options& opt, bool single_values) {
  chc_config* raw = nullptr;
  if (chc_config_load(opt.config.c_str(), &raw) != CHC_OK) return nullptr;
  ConfigPtr config(raw);
  auto set = [&](const char* key, const std::string& value) {
    return value.empty() || chc_config_set(config.get(), key, value.c_str()) == CHC_OK;
  };
  bool ok = set("trace", opt.trace) && set("split", opt.split) &&
            (!opt.seed_given || set("seed", std::to_string(opt.seed))) &&
            (opt.threads == 0 || set("threads", std::to_string(opt.threads)));
  if (single_values) {
    ok = ok && set("mode", opt.mode) && set("policy", opt.policy) &&
         set("placement", opt.placement) && set("capacity", opt.capacities);
  }
  return ok ? std::move(config) : nullptr;
}

void add_common(CLI::App* cmd, Options& opt, bool config_required) {
  auto* c = cmd->add_option("--config", opt.config, "Experiment config (JSON)");
  if (config_required) c->required();
  cmd->add_option("--trace", opt.trace, "Request trace CSV (overrides config)");
  cmd->add_option("--seed", opt.seed, "RNG seed")->each([&](const std::string&) {
    opt.seed_given = true;
  });
  cmd->add_option("--split", opt.split, "Fraction of the trace used only for popularity");
  cmd->add_option("--threads", opt.threads, "Worker threads (0 = all cores)");
  cmd->add_option("--out", opt.out, "Write output here instead of stdout");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cooperative hierarchical caching simulator"};
  app.require_subcommand(1);
  Options opt;

  auto* run = app.add_subcommand("run", "Place, replay and print one CSV row");
  add_common(run, opt, true);
  run->add_option("--mode", opt.mode, "chc|noncoop|edgeonly|cloudonly");
  run->add_option("--policy", opt.policy, "rcr|lru|static");
  run->add_option("--placement", opt.placement, "pcd|mpcex|femtox|popular|none");
  run->add_option("--capacities", opt.capacities, "Total capacity (e.g. 0.4TB, 5%)");

  auto* sweep = app.add_subcommand("sweep", "Run every capacity x mode x placement x policy");
  add_common(sweep, opt, true);
  sweep->add_option("--capacities", opt.capacities, "Comma-separated total capacities")
      ->required();
  sweep->add_option("--mode", opt.mode, "Comma-separated modes");
  sweep->add_option("--policy", opt.policy, "Comma-separated policies");
  sweep->add_option("--placement", opt.placement, "Comma-separated placements");

  auto* gen = app.add_subcommand("gen-trace", "Write the config's synthetic Zipf trace");
  add_common(gen, opt, true);

  auto* validate = app.add_subcommand("validate", "Check a config and its model");
  add_common(validate, opt, true);

  auto* oracle = app.add_subcommand("oracle", "Greedy versus exhaustive optimum report");
  add_common(oracle, opt, false);
  oracle->add_option("--instances", opt.instances, "Number of random instances");

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) {
    auto config = open_config(opt, true);
    if (!config) return fail("run");
    char* csv = nullptr;
    if (chc_run(config.get(), nullptr, &csv) != CHC_OK) return fail("run");
    return emit(opt, take(csv)) ? 0 : 1;
  }
  if (sweep->parsed()) {
    auto config = open_config(opt, false);
    if (!config) return fail("sweep");
    char* csv = nullptr;
    if (chc_sweep(config.get(), opt.capacities.c_str(), opt.mode.c_str(),
                  opt.placement.c_str(), opt.policy.c_str(), &csv) != CHC_OK) {
      return fail("sweep");
    }
    return emit(opt, take(csv)) ? 0 : 1;
  }
  if (gen->parsed()) {
    auto config = open_config(opt, false);
    if (!config) return fail("gen-trace");
    char* csv = nullptr;
    if (chc_gen_trace(config.get(), &csv) != CHC_OK) return fail("gen-trace");
    return emit(opt, take(csv)) ? 0 : 1;
  }
  if (validate->parsed()) {
    auto config = open_config(opt, false);
    if (!config) return fail("validate");
    char* report = nullptr;
    const auto status = chc_validate(config.get(), &report);
    if (report == nullptr) return fail("validate");
    const auto text = take(report);
    if (!emit(opt, text + "\n")) return 1;
    if (status != CHC_OK) {
      std::cerr << "chc: validate: " << chc_last_error() << "\n";
      return 1;
    }
    return 0;
  }
  if (oracle->parsed()) {
    std::uint64_t seed = opt.seed_given ? opt.seed : 1;
    chc_oracle_report report{};
    if (chc_oracle(seed, opt.instances, &report) != CHC_OK) return fail("oracle");
    char line[256];
    std::snprintf(line, sizeof(line),
                  "instances=%u min_ratio=%.17g mean_ratio=%.17g worst_seed=%llu seconds=%.3f\n",
                  report.instances, report.min_ratio, report.mean_ratio,
                  static_cast<unsigned long long>(report.worst_seed), report.seconds);
    if (!emit(opt, line)) return 1;
    return report.min_ratio >= 0.5 ? 0 : 1;
  }
  return 0;
}
