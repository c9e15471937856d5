// SPDX-License-Identifier: Apache-2.0
//
// xlmimo: near-field beam focusing and user grouping for modular XL-MIMO
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#ifndef XLMIMO_CHANNEL_HPP
#define XLMIMO_CHANNEL_HPP

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "xlmimo/geometry.hpp"

namespace xlmimo {

/// One propagation path: the LoS path (l = 0) or a single-bounce scatterer.
struct PathParams {
  PolarLocation location;                 // (r_{k,l}, theta_{k,l}) seen by the array
  std::complex<double> gain{0.0, 0.0};    // alpha_{k,l}
  double scatterer_user_distance_m = 0.0; // t_{k,l}, NLoS only
  double phase_rad = 0.0;                 // w_{k,l}, NLoS only
  double rcs_m2 = 0.0;                    // sigma_{k,l}, NLoS only
  bool is_los = false;
};

/// Multi-path channel of one user.  h_nf sums USW responses of every path,
/// h_ff sums UPW responses at the path angles; both weighted by path gains.
struct UserChannel {
  std::vector<PathParams> paths;  // paths[0] is the LoS path
  Eigen::VectorXcd h_nf;
  Eigen::VectorXcd h_ff;

  const PolarLocation& user_location() const { return paths.front().location; }
};

enum class Layout { kDisk, kLine };

/// Scenario parameters; defaults mirror the reference simulation setup.
struct ScenarioConfig {
  ArrayGeometry geometry;
  int num_users = 30;
  int num_rbs = 15;
  int nlos_paths = 20;
  Layout layout = Layout::kDisk;
  double r_c_m = 200.0;     // disk center distance
  double r_max_m = 20.0;    // disk radius
  double r_line_m = 200.0;  // line layout range [0, r_line]
  double pt_db = 90.0;      // per-user transmit SNR
  std::uint64_t seed = 1;
  double scatterer_r_min_m = 0.0;
  double scatterer_r_max_m = 200.0;
  double scatterer_theta_min_rad = -1.57079632679489661923;
  double scatterer_theta_max_rad = 1.57079632679489661923;
  double rcs_min_m2 = 1.0;
  double rcs_max_m2 = 40.0;
  std::optional<double> beta0;  // reference power gain override

  void validate() const;
};

/// Reference power gain at 1 m implied by the free-space LoS model.
double default_beta0(double lambda_m);

/// LoS path gain sqrt(beta0)/r; with the default beta0 this is lambda/(4 pi r).
std::complex<double> los_gain(const PolarLocation& user, double lambda_m,
                              std::optional<double> beta0 = std::nullopt);

/// NLoS path gain sqrt(beta0) sqrt(rcs) / (sqrt(4 pi) t r) e^{-j 2 pi t /
/// lambda + j w}; with the default beta0 this is the usual radar-equation form
/// lambda sqrt(rcs) / ((4 pi)^{3/2} t r).
std::complex<double> nlos_gain(const PathParams& path, double lambda_m,
                               std::optional<double> beta0 = std::nullopt);

/// Draw user positions and scatterer path parameters; deterministic in
/// (cfg.seed, user index) via documented RNG streams.  Channel vectors are
/// left empty; call synth_channels to fill them.
std::vector<UserChannel> sample_scenario(const ScenarioConfig& cfg);

/// Populate h_nf (USW responses) and h_ff (UPW responses) for every user.
void synth_channels(const ScenarioConfig& cfg, std::vector<UserChannel>& users);

/// sample_scenario followed by synth_channels.
std::vector<UserChannel> build_channels(const ScenarioConfig& cfg);

/// Per-user linear transmit SNR vector for a common pt_db.
std::vector<double> uniform_powers(int num_users, double pt_db);

}  // namespace xlmimo

#endif  // XLMIMO_CHANNEL_HPP
