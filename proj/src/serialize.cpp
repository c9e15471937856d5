// SPDX-License-Identifier: Apache-2.0
//
// xlmimo: near-field beam focusing and user grouping for modular XL-MIMO
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#include "xlmimo/serialize.hpp"

#include "xlmimo/response.hpp"

namespace xlmimo {

using nlohmann::json;

namespace {
constexpr const char* kScenarioSchema = "xlmimo-scenario-v1";
constexpr const char* kAssignmentSchema = "xlmimo-assignment-v1";
}  // namespace

json scenario_to_json(const ScenarioConfig& cfg,
                      const std::vector<UserChannel>& users) {
  json doc;
  doc["schema"] = kScenarioSchema;
  doc["seed"] = cfg.seed;
  doc["geometry"] = json{{"num_modules", cfg.geometry.num_modules()},
                         {"elements_per_module", cfg.geometry.elements_per_module()},
                         {"gamma", cfg.geometry.gamma()},
                         {"d_m", cfg.geometry.d_m()},
                         {"lambda_m", cfg.geometry.lambda_m()}};
  json juser = json::array();
  for (const UserChannel& u : users) {
    json paths = json::array();
    for (const PathParams& p : u.paths) {
      paths.push_back(json{{"r_m", p.location.r_m},
                           {"theta_rad", p.location.theta_rad},
                           {"gain_re", p.gain.real()},
                           {"gain_im", p.gain.imag()},
                           {"t_m", p.scatterer_user_distance_m},
                           {"w_rad", p.phase_rad},
                           {"rcs_m2", p.rcs_m2},
                           {"is_los", p.is_los}});
    }
    juser.push_back(json{{"paths", paths}});
  }
  doc["users"] = juser;
  return doc;
}

std::vector<UserChannel> scenario_from_json(const json& doc,
                                            const ArrayGeometry& geometry) {
  if (!doc.contains("schema") || doc.at("schema") != kScenarioSchema)
    throw ConfigError("scenario document has an unknown schema");
  std::vector<UserChannel> users;
  for (const json& ju : doc.at("users")) {
    UserChannel u;
    for (const json& jp : ju.at("paths")) {
      PathParams p;
      p.location.r_m = jp.at("r_m").get<double>();
      p.location.theta_rad = jp.at("theta_rad").get<double>();
      p.gain = {jp.at("gain_re").get<double>(), jp.at("gain_im").get<double>()};
      p.scatterer_user_distance_m = jp.at("t_m").get<double>();
      p.phase_rad = jp.at("w_rad").get<double>();
      p.rcs_m2 = jp.at("rcs_m2").get<double>();
      p.is_los = jp.at("is_los").get<bool>();
      u.paths.push_back(p);
    }
    if (u.paths.empty()) throw ConfigError("scenario user without paths");
    users.push_back(std::move(u));
  }
  const int nm = geometry.num_elements();
  for (UserChannel& u : users) {
    u.h_nf = Eigen::VectorXcd::Zero(nm);
    u.h_ff = Eigen::VectorXcd::Zero(nm);
    for (const PathParams& p : u.paths) {
      u.h_nf += p.gain * response_usw(geometry, p.location).entries;
      u.h_ff += p.gain * response_upw(geometry, p.location.theta_rad).entries;
    }
  }
  return users;
}

json assignment_to_json(const GroupingAssignment& assignment, std::uint64_t seed,
                        const BeamformerSpec& spec,
                        const std::vector<double>& per_rb_rate) {
  assignment.validate();
  json doc;
  doc["schema"] = kAssignmentSchema;
  doc["seed"] = seed;
  doc["scheme"] = to_string(spec.scheme);
  doc["csi"] = to_string(spec.csi);
  doc["assignment"] = assignment.rb_of_user;
  doc["num_rbs"] = assignment.num_rbs;
  doc["sum_rate_bps_hz"] = assignment.sum_rate_bps_hz;
  doc["per_rb_rates"] = per_rb_rate;
  return doc;
}

}  // namespace xlmimo
