// SPDX-License-Identifier: Apache-2.0
//
// xlmimo: near-field beam focusing and user grouping for modular XL-MIMO
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "xlmimo/harness.hpp"
#include "xlmimo/serialize.hpp"

using namespace xlmimo;
using nlohmann::json;

namespace {

json tiny_multiuser_doc() {
  return json::parse(R"({
    "scenario": {"num_users": 4, "num_rbs": 2, "nlos_paths": 1},
    "multiuser": {
      "sweep_variable": "pt_db",
      "sweep_values": [90.0],
      "combos": [
        {"array": "modular", "scheme": "mmse", "csi": "near_field", "grouping": "greedy"},
        {"array": "modular", "scheme": "mmse", "csi": "near_field", "grouping": "random"}
      ]
    },
    "seeds": [1, 2]
  })");
}

}  // namespace

TEST_CASE("defaults mirror the reference setup") {
  const RunConfig cfg = parse_config(json::object());
  CHECK(cfg.geometry.num_modules() == 32);
  CHECK(cfg.geometry.elements_per_module() == 4);
  CHECK(cfg.geometry.gamma() == 13);
  CHECK(cfg.geometry.d_m() == doctest::Approx(0.0628));
  CHECK(cfg.scenario.num_users == 30);
  CHECK(cfg.scenario.num_rbs == 15);
  CHECK(cfg.scenario.nlos_paths == 20);
  CHECK(cfg.scenario.r_max_m == doctest::Approx(20.0));
  CHECK(cfg.scenario.r_c_m == doctest::Approx(200.0));
  CHECK(cfg.scenario.pt_db == doctest::Approx(90.0));
  CHECK(cfg.seeds == std::vector<std::uint64_t>{1});
}

TEST_CASE("unknown keys are rejected") {
  CHECK_THROWS_AS(parse_config(json::parse(R"({"geometrie": {}})")), ConfigError);
  CHECK_THROWS_AS(parse_config(json::parse(R"({"geometry": {"n": 3}})")),
                  ConfigError);
  CHECK_THROWS_AS(
      parse_config(json::parse(R"({"scenario": {"r_c": 100.0}})")), ConfigError);
  CHECK_THROWS_AS(
      parse_config(json::parse(R"({"pattern": {"mode": "warp"}})")), ConfigError);
  CHECK_THROWS_AS(parse_config(json::parse(R"({"seeds": []})")), ConfigError);
  CHECK_THROWS_AS(parse_config(json::parse(R"({"threads": 0})")), ConfigError);
}

TEST_CASE("resolved config embeds every field") {
  const RunConfig cfg = parse_config(tiny_multiuser_doc());
  const json r = cfg.resolved();
  CHECK(r.at("scenario").at("num_users") == 4);
  CHECK(r.at("multiuser").at("combos").size() == 2);
  CHECK(r.at("seeds") == json::array({1, 2}));
  // round-trip: parsing the resolved document reproduces it
  CHECK(parse_config(r).resolved() == r);
}

TEST_CASE("pattern sweep output") {
  RunConfig cfg = parse_config(json::parse(R"({
    "geometry": {"num_modules": 4, "elements_per_module": 4, "gamma": 13},
    "pattern": {"mode": "ff_ff",
                "variants": ["closed_form", "direct_sum", "collocated"],
                "sweep": {"variable": "delta_sin_theta", "start": -0.2,
                          "stop": 0.2, "points": 11}}
  })"));
  std::ostringstream os;
  run_pattern_sweep(cfg, os);
  const std::string text = os.str();
  CHECK(text.find("# config = ") != std::string::npos);
  CHECK(text.find("sweep_value,variant,gain\n") != std::string::npos);
  CHECK(std::count(text.begin(), text.end(), '\n') == 3 + 11 * 3);

  // degenerate single-point sweep emits exactly one row per variant
  RunConfig single = cfg;
  single.pattern.sweep.points = 1;
  single.pattern.sweep.start = 0.0;
  single.pattern.variants = {"closed_form"};
  std::ostringstream os1;
  run_pattern_sweep(single, os1);
  const std::string single_text = os1.str();
  CHECK(std::count(single_text.begin(), single_text.end(), '\n') == 4);
  CHECK(single_text.find("0,closed_form,1\n") != std::string::npos);
}

TEST_CASE("nf sweeps skip invisible spatial frequencies") {
  RunConfig cfg = parse_config(json::parse(R"({
    "pattern": {"mode": "nf_nf", "focus_r_m": 200.0, "observe_r_m": 200.0,
                "variants": ["exact"],
                "sweep": {"variable": "delta_sin_theta", "start": 0.9,
                          "stop": 1.3, "points": 5}}
  })"));
  std::ostringstream os;
  run_pattern_sweep(cfg, os);
  const std::string text = os.str();
  // 0.9 and 1.0 are visible; 1.1, 1.2, 1.3 exceed |sin| = 1
  CHECK(std::count(text.begin(), text.end(), '\n') == 3 + 2);
}

TEST_CASE("two-axis location sweep") {
  RunConfig cfg = parse_config(json::parse(R"({
    "pattern": {"mode": "nf_nf", "focus_r_m": 200.0,
                "variants": ["common"],
                "sweep": {"variable": "delta_sin_theta", "start": -0.1,
                          "stop": 0.1, "points": 3},
                "sweep2": {"variable": "observe_r_m", "start": 100.0,
                           "stop": 300.0, "points": 2}}
  })"));
  std::ostringstream os;
  run_pattern_sweep(cfg, os);
  const std::string text = os.str();
  CHECK(text.find("sweep_value,sweep2_value,variant,gain\n") != std::string::npos);
  CHECK(std::count(text.begin(), text.end(), '\n') == 3 + 3 * 2);
}

TEST_CASE("resolution report") {
  RunConfig cfg = parse_config(json::parse(R"({
    "resolution": {"theta_primes_rad": [0.0, 1.5707963267948966],
                   "focus_r_m": [200.0]}
  })"));
  const json rep = run_resolution_report(cfg);
  CHECK(rep.at("schema") == "xlmimo-resolution-v1");
  const json& entries = rep.at("entries");
  REQUIRE(entries.size() == 2);

  const json& e0 = entries[0];
  CHECK(e0.at("analytic").at("r_hp_m").get<double>() ==
        doctest::Approx(1086.7917).epsilon(1e-6));
  CHECK(e0.at("analytic").at("angular_res").get<double>() ==
        doctest::Approx(1.0 / 208.0));
  CHECK(e0.at("analytic").at("grating_directions").size() == 25);
  // the numeric half-power z sits a few percent from 1/r_hp by construction
  CHECK(e0.at("numeric").at("rel_err_z").get<double>() ==
        doctest::Approx(0.0313).epsilon(0.05));
  const json& f0 = e0.at("numeric").at("focus")[0];
  CHECK(f0.at("rel_err_minus").get<double>() < 0.05);
  CHECK(f0.at("rel_err_plus").get<double>() < 0.05);

  // the endfire direction is singular: no numeric block
  const json& e1 = entries[1];
  CHECK(e1.at("analytic").at("singular_direction") == true);
  CHECK_FALSE(e1.contains("numeric"));
}

TEST_CASE("multiuser experiment: csv rows, summary, thread invariance") {
  RunConfig cfg = parse_config(tiny_multiuser_doc());
  std::ostringstream csv1;
  const json sum1 = run_multiuser_experiment(cfg, csv1);
  const std::string csv1_text = csv1.str();
  // 1 sweep value x 2 combos x 2 seeds
  CHECK(std::count(csv1_text.begin(), csv1_text.end(), '\n') == 3 + 4);
  REQUIRE(sum1.at("cells").size() == 2);
  for (const json& cell : sum1.at("cells")) {
    CHECK(cell.at("n") == 2);
    CHECK(cell.at("mean_sum_rate_bps_hz").get<double>() > 0.0);
  }
  CHECK(sum1.contains("pr_db_computed"));
  CHECK(sum1.at("pr_db_computed")[0].get<double>() ==
        doctest::Approx(3.975).epsilon(1e-3));

  RunConfig cfg2 = cfg;
  cfg2.threads = 2;
  std::ostringstream csv2;
  const json sum2 = run_multiuser_experiment(cfg2, csv2);
  CHECK(csv1.str() == csv2.str());
  CHECK(sum1.at("cells") == sum2.at("cells"));

  // aggregate statistics ignore the order of seeds
  RunConfig cfg3 = cfg;
  cfg3.seeds = {2, 1};
  std::ostringstream csv3;
  const json sum3 = run_multiuser_experiment(cfg3, csv3);
  CHECK(sum3.at("cells") == sum1.at("cells"));
}

TEST_CASE("scenario serialization round trip") {
  ScenarioConfig sc{ArrayGeometry{32, 4, 13, 0.0628, 0.1256}};
  sc.num_users = 3;
  sc.num_rbs = 2;
  sc.nlos_paths = 2;
  sc.seed = 77;
  const auto users = build_channels(sc);
  // serialize, re-parse through text, resynthesize
  const json doc = json::parse(scenario_to_json(sc, users).dump());
  const auto replay = scenario_from_json(doc, sc.geometry);
  REQUIRE(replay.size() == users.size());
  for (std::size_t k = 0; k < users.size(); ++k) {
    REQUIRE(replay[k].paths.size() == users[k].paths.size());
    CHECK((replay[k].h_nf - users[k].h_nf).cwiseAbs().maxCoeff() == 0.0);
    CHECK((replay[k].h_ff - users[k].h_ff).cwiseAbs().maxCoeff() == 0.0);
  }
  json bad = doc;
  bad["schema"] = "other";
  CHECK_THROWS_AS(scenario_from_json(bad, sc.geometry), ConfigError);
}

TEST_CASE("assignment serialization") {
  ScenarioConfig sc{ArrayGeometry{32, 4, 13, 0.0628, 0.1256}};
  sc.num_users = 4;
  sc.num_rbs = 2;
  sc.nlos_paths = 1;
  sc.seed = 3;
  const auto users = build_channels(sc);
  const auto powers = uniform_powers(4, 90.0);
  const BeamformerSpec spec{Scheme::kMmse, Csi::kNearField};
  const GroupingAssignment a = greedy_grouping(users, powers, 2, spec, 3);
  const GroupingEvaluation eval = evaluate_grouping(a, users, powers, spec);
  const json doc = assignment_to_json(a, 3, spec, eval.per_rb_rate);
  CHECK(doc.at("schema") == "xlmimo-assignment-v1");
  CHECK(doc.at("seed") == 3);
  CHECK(doc.at("scheme") == "mmse");
  CHECK(doc.at("csi") == "near_field");
  CHECK(doc.at("assignment").size() == 4);
  CHECK(doc.at("per_rb_rates").size() == 2);
  CHECK(doc.at("sum_rate_bps_hz").get<double>() ==
        doctest::Approx(a.sum_rate_bps_hz));
}

TEST_CASE("fast oracle level passes") {
  const OracleReport rep = validate_oracles(OracleLevel::kFast);
  for (const OracleCheck& c : rep.checks) {
    INFO(c.name, ": ", c.measured, " vs ", c.tolerance);
    CHECK(c.pass);
  }
  CHECK(rep.all_pass());
  std::ostringstream os;
  print_oracle_report(rep, os);
  CHECK(os.str().find("[PASS] ff_closed_vs_double_sum") != std::string::npos);
}

TEST_CASE("a tampered tolerance surfaces as a failure") {
  OracleReport rep = validate_oracles(OracleLevel::kFast);
  REQUIRE(!rep.checks.empty());
  OracleCheck& c = rep.checks.front();
  c.tolerance = -1.0;  // tightened beyond any measurement
  c.pass = c.measured <= c.tolerance;
  CHECK_FALSE(rep.all_pass());
  std::ostringstream os;
  print_oracle_report(rep, os);
  CHECK(os.str().find("[FAIL] " + c.name) != std::string::npos);
  CHECK(os.str().find("CHECK FAILURES PRESENT") != std::string::npos);
}
