// SPDX-License-Identifier: Apache-2.0
//
// xlmimo: near-field beam focusing and user grouping for modular XL-MIMO
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <optional>

#include "xlmimo/harness.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidationFailure = 1;
constexpr int kExitConfigError = 2;

xlmimo::RunConfig resolve_config(const std::string& config_path,
                                 std::optional<std::uint64_t> seed,
                                 const std::string& out, int threads) {
  xlmimo::RunConfig cfg = config_path.empty()
                              ? xlmimo::RunConfig{}
                              : xlmimo::load_config_file(config_path);
  if (seed) cfg.seeds = {*seed};
  if (!out.empty()) cfg.out_path = out;
  if (threads > 0) cfg.threads = threads;
  return cfg;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open output file: " + path);
  return os;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"modular XL-MIMO near-field pattern and scheduling simulator"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::string out_path;
  std::optional<std::uint64_t> seed;
  int threads = 0;
  app.add_option("--config", config_path, "JSON run configuration")
      ->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "override the seed list with a single seed");
  app.add_option("--out", out_path, "output path (default from config)");
  app.add_option("--threads", threads, "worker threads for seed fan-out");

  auto* pattern_cmd =
      app.add_subcommand("pattern", "beam pattern sweep, CSV output");
  auto* resolution_cmd =
      app.add_subcommand("resolution", "resolution report, JSON output");
  auto* multiuser_cmd = app.add_subcommand(
      "multiuser", "seeded multi-user experiments, CSV + JSON summary");
  std::string level = "fast";
  auto* validate_cmd =
      app.add_subcommand("validate", "run the built-in oracle checks");
  validate_cmd->add_option("--level", level, "fast or full")
      ->check(CLI::IsMember({"fast", "full"}));

  CLI11_PARSE(app, argc, argv);

  try {
    const xlmimo::RunConfig cfg =
        resolve_config(config_path, seed, out_path, threads);

    if (pattern_cmd->parsed()) {
      if (cfg.out_path.empty()) {
        xlmimo::run_pattern_sweep(cfg, std::cout);
      } else {
        auto os = open_output(cfg.out_path);
        xlmimo::run_pattern_sweep(cfg, os);
      }
      return kExitOk;
    }
    if (resolution_cmd->parsed()) {
      const nlohmann::json report = xlmimo::run_resolution_report(cfg);
      if (cfg.out_path.empty()) {
        std::cout << report.dump(2) << "\n";
      } else {
        auto os = open_output(cfg.out_path);
        os << report.dump(2) << "\n";
      }
      return kExitOk;
    }
    if (multiuser_cmd->parsed()) {
      nlohmann::json summary;
      if (cfg.out_path.empty()) {
        summary = xlmimo::run_multiuser_experiment(cfg, std::cout);
      } else {
        auto os = open_output(cfg.out_path);
        summary = xlmimo::run_multiuser_experiment(cfg, os);
        auto js = open_output(cfg.out_path + ".summary.json");
        js << summary.dump(2) << "\n";
        return kExitOk;
      }
      std::cout << summary.dump(2) << "\n";
      return kExitOk;
    }
    if (validate_cmd->parsed()) {
      const xlmimo::OracleReport report = xlmimo::validate_oracles(
          level == "full" ? xlmimo::OracleLevel::kFull
                          : xlmimo::OracleLevel::kFast);
      xlmimo::print_oracle_report(report, std::cout);
      return report.all_pass() ? kExitOk : kExitValidationFailure;
    }
  } catch (const xlmimo::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidationFailure;
  }
  return kExitOk;
}
