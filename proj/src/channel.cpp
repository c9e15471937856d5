// SPDX-License-Identifier: Apache-2.0
//
// xlmimo: near-field beam focusing and user grouping for modular XL-MIMO
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#include "xlmimo/channel.hpp"

#include <cmath>
#include <numbers>

#include "xlmimo/response.hpp"
#include "xlmimo/rng.hpp"

namespace xlmimo {

namespace {
constexpr double kPi = std::numbers::pi;
}

void ScenarioConfig::validate() const {
  check(num_users >= 1, "scenario: need at least one user");
  check(num_rbs >= 1, "scenario: need at least one RB");
  check(num_rbs < num_users, "scenario: requires Q < K");
  check(nlos_paths >= 0, "scenario: NLoS path count must be >= 0");
  check(pt_db > -300.0 && pt_db < 300.0, "scenario: pt_db out of range");
  if (layout == Layout::kDisk) {
    check(r_c_m > 0.0, "scenario: disk center distance must be positive");
    check(r_max_m > 0.0 && r_max_m < r_c_m,
          "scenario: disk radius must satisfy 0 < r_max < r_c");
  } else {
    check(r_line_m > 0.0, "scenario: line range must be positive");
  }
  check(scatterer_r_min_m >= 0.0 && scatterer_r_max_m > scatterer_r_min_m,
        "scenario: bad scatterer distance range");
  check(scatterer_theta_min_rad >= -kPi / 2 - 1e-12 &&
            scatterer_theta_max_rad <= kPi / 2 + 1e-12 &&
            scatterer_theta_max_rad > scatterer_theta_min_rad,
        "scenario: bad scatterer angle range");
  check(rcs_min_m2 > 0.0 && rcs_max_m2 >= rcs_min_m2, "scenario: bad RCS range");
  if (beta0) check(*beta0 > 0.0, "scenario: beta0 must be positive");
}

double default_beta0(double lambda_m) {
  const double s = lambda_m / (4.0 * kPi);
  return s * s;
}

std::complex<double> los_gain(const PolarLocation& user, double lambda_m,
                              std::optional<double> beta0) {
  user.validate();
  const double b0 = beta0.value_or(default_beta0(lambda_m));
  return {std::sqrt(b0) / user.r_m, 0.0};
}

std::complex<double> nlos_gain(const PathParams& path, double lambda_m,
                               std::optional<double> beta0) {
  path.location.validate();
  check_domain(path.scatterer_user_distance_m > 0.0,
               "nlos_gain: scatterer-user distance must be positive");
  check_domain(path.rcs_m2 > 0.0, "nlos_gain: RCS must be positive");
  const double b0 = beta0.value_or(default_beta0(lambda_m));
  const double amp = std::sqrt(b0) * std::sqrt(path.rcs_m2) /
                     (std::sqrt(4.0 * kPi) * path.scatterer_user_distance_m *
                      path.location.r_m);
  const double phase =
      -2.0 * kPi * path.scatterer_user_distance_m / lambda_m + path.phase_rad;
  return amp * std::complex<double>(std::cos(phase), std::sin(phase));
}

std::vector<UserChannel> sample_scenario(const ScenarioConfig& cfg) {
  cfg.validate();
  const double lambda = cfg.geometry.lambda_m();
  std::vector<UserChannel> users(cfg.num_users);
  for (int k = 0; k < cfg.num_users; ++k) {
    UserChannel& uc = users[k];
    uc.paths.reserve(cfg.nlos_paths + 1);

    rng::Stream pos(cfg.seed, rng::kStreamsPerUser * k + rng::kUserPositionStream);
    PathParams los;
    los.is_los = true;
    double user_x, user_y;
    if (cfg.layout == Layout::kDisk) {
      // area-uniform draw over the disk centered at (r_c, 0)
      const double rho = cfg.r_max_m * std::sqrt(pos.next_u01());
      const double phi = 2.0 * kPi * pos.next_u01();
      user_x = cfg.r_c_m + rho * std::cos(phi);
      user_y = rho * std::sin(phi);
    } else {
      // 1 - u maps the draw to (0, r_line], keeping r > 0
      user_x = cfg.r_line_m * (1.0 - pos.next_u01());
      user_y = 0.0;
    }
    los.location.r_m = std::hypot(user_x, user_y);
    los.location.theta_rad = std::atan2(user_y, user_x);
    los.gain = los_gain(los.location, lambda, cfg.beta0);
    uc.paths.push_back(los);

    rng::Stream loc(cfg.seed, rng::kStreamsPerUser * k + rng::kScattererLocStream);
    rng::Stream phs(cfg.seed, rng::kStreamsPerUser * k + rng::kScattererPhaseStream);
    rng::Stream rcs(cfg.seed, rng::kStreamsPerUser * k + rng::kScattererRcsStream);
    for (int l = 0; l < cfg.nlos_paths; ++l) {
      PathParams p;
      // mapped to (r_min, r_max] so the 1/r gain stays finite
      p.location.r_m = cfg.scatterer_r_max_m -
                       (cfg.scatterer_r_max_m - cfg.scatterer_r_min_m) *
                           loc.next_u01();
      p.location.theta_rad =
          loc.next_uniform(cfg.scatterer_theta_min_rad, cfg.scatterer_theta_max_rad);
      p.phase_rad = phs.next_uniform(-kPi, kPi);
      p.rcs_m2 = rcs.next_uniform(cfg.rcs_min_m2, cfg.rcs_max_m2);
      const double sx = p.location.r_m * std::cos(p.location.theta_rad);
      const double sy = p.location.r_m * std::sin(p.location.theta_rad);
      p.scatterer_user_distance_m = std::hypot(sx - user_x, sy - user_y);
      p.gain = nlos_gain(p, lambda, cfg.beta0);
      uc.paths.push_back(p);
    }
  }
  return users;
}

void synth_channels(const ScenarioConfig& cfg, std::vector<UserChannel>& users) {
  const int nm = cfg.geometry.num_elements();
  for (UserChannel& uc : users) {
    check(!uc.paths.empty(), "synth_channels: user without paths");
    uc.h_nf = Eigen::VectorXcd::Zero(nm);
    uc.h_ff = Eigen::VectorXcd::Zero(nm);
    for (const PathParams& p : uc.paths) {
      uc.h_nf += p.gain * response_usw(cfg.geometry, p.location).entries;
      uc.h_ff += p.gain * response_upw(cfg.geometry, p.location.theta_rad).entries;
    }
  }
}

std::vector<UserChannel> build_channels(const ScenarioConfig& cfg) {
  std::vector<UserChannel> users = sample_scenario(cfg);
  synth_channels(cfg, users);
  return users;
}

std::vector<double> uniform_powers(int num_users, double pt_db) {
  check(num_users >= 1, "uniform_powers: need at least one user");
  return std::vector<double>(num_users, std::pow(10.0, pt_db / 10.0));
}

}  // namespace xlmimo
