// SPDX-License-Identifier: Apache-2.0
//
// xlmimo: near-field beam focusing and user grouping for modular XL-MIMO
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#ifndef XLMIMO_HARNESS_HPP
#define XLMIMO_HARNESS_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "xlmimo/channel.hpp"
#include "xlmimo/pattern.hpp"
#include "xlmimo/scheduler.hpp"

namespace xlmimo {

enum class PatternMode { kFfFf, kNfFf, kNfNf };
enum class SweepVariable { kDeltaSinTheta, kDeltaRm, kObserveRm };
enum class GroupingMethod { kGreedy, kRandom };

struct SweepSpec {
  SweepVariable variable = SweepVariable::kDeltaSinTheta;
  double start = -0.4;
  double stop = 0.4;
  int points = 4001;
  std::vector<double> grid() const;
};

struct PatternConfig {
  PatternMode mode = PatternMode::kNfNf;
  double focus_r_m = 200.0;
  double focus_theta_rad = 0.0;
  double observe_r_m = 200.0;  // fixed distance for angle sweeps
  std::vector<std::string> variants;  // subset of the mode's variant set
  SweepSpec sweep;
  std::optional<SweepSpec> sweep2;  // optional second axis (location grids)
};

struct MultiuserCombo {
  std::string array = "modular";  // "modular" | "collocated"
  Scheme scheme = Scheme::kMmse;
  Csi csi = Csi::kNearField;
  GroupingMethod grouping = GroupingMethod::kGreedy;
  std::string id() const;
};

struct MultiuserConfig {
  std::string sweep_variable = "pt_db";  // "pt_db" | "r_max_m" | "r_line_m"
  std::vector<double> sweep_values;
  std::vector<MultiuserCombo> combos;
};

struct ResolutionConfig {
  std::vector<double> theta_primes_rad{0.0};
  std::vector<double> focus_r_m{200.0};
};

/// Fully resolved run configuration.  Loaded from a strict-keys JSON document;
/// every omitted field takes the reference-setup default.
struct RunConfig {
  ArrayGeometry geometry{32, 4, 13, 0.0628, 0.1256};
  ScenarioConfig scenario{ArrayGeometry{32, 4, 13, 0.0628, 0.1256}};
  BeamformerSpec beamformer;
  PatternConfig pattern;
  MultiuserConfig multiuser;
  ResolutionConfig resolution;
  std::vector<std::uint64_t> seeds{1};
  int threads = 1;
  std::string out_path;

  /// The resolved configuration as a canonical JSON document (embedded in
  /// every output file so runs can be regenerated byte-identically).
  nlohmann::json resolved() const;
};

RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config_file(const std::string& path);

/// Pattern sweep: one CSV row per grid point per variant, preceded by a '#'
/// header block carrying the resolved config.
void run_pattern_sweep(const RunConfig& cfg, std::ostream& os);

/// Analytic resolution quantities plus their numeric half-power cross-checks.
nlohmann::json run_resolution_report(const RunConfig& cfg);

/// Seeded multi-user experiment over the configured sweep and combos.  CSV
/// carries per-seed rows; the returned JSON aggregates mean/stderr per cell.
nlohmann::json run_multiuser_experiment(const RunConfig& cfg, std::ostream& csv_os);

enum class OracleLevel { kFast, kFull };

struct OracleCheck {
  std::string name;
  double measured = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string detail;
};

struct OracleReport {
  std::vector<OracleCheck> checks;
  bool all_pass() const;
};

/// Built-in validation suite: independent-route checks (explicit sums,
/// quadrature, bisection, closed-form identities) against the implementation.
/// kFull adds the exhaustive small-instance grouping comparison.
OracleReport validate_oracles(OracleLevel level);

void print_oracle_report(const OracleReport& report, std::ostream& os);

}  // namespace xlmimo

#endif  // XLMIMO_HARNESS_HPP
