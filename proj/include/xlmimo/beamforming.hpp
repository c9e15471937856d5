// SPDX-License-Identifier: Apache-2.0
//
// xlmimo: near-field beam focusing and user grouping for modular XL-MIMO
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#ifndef XLMIMO_BEAMFORMING_HPP
#define XLMIMO_BEAMFORMING_HPP

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "xlmimo/channel.hpp"

namespace xlmimo {

enum class Scheme { kMrc, kZf, kMmse };
enum class Csi { kNearField, kFarField };

/// Which linear receiver to build and which channel knowledge it sees.  SINR
/// evaluation always uses the true near-field channels; FarField CSI is the
/// mismatched case where the receiver was designed from the plane-wave model.
struct BeamformerSpec {
  Scheme scheme = Scheme::kMmse;
  Csi csi = Csi::kNearField;
};

const char* to_string(Scheme s);
const char* to_string(Csi c);
Scheme scheme_from_string(const std::string& s);
Csi csi_from_string(const std::string& s);

/// Estimated channel of a user under the chosen CSI assumption.
inline const Eigen::VectorXcd& csi_channel(const UserChannel& u, Csi csi) {
  return csi == Csi::kNearField ? u.h_nf : u.h_ff;
}

/// Unit-norm receive beamformer for `user` within `group` (global indices).
/// MRC: matched filter.  ZF: projection of the desired channel onto the
/// orthogonal complement of the interferers (rank-revealing; throws
/// DegenerateGeometryError on rank deficiency or when the desired channel
/// lies inside the interference subspace).  MMSE: solve of the
/// interference-plus-noise covariance against the desired channel.
Eigen::VectorXcd beamform(const BeamformerSpec& spec,
                          const std::vector<UserChannel>& users,
                          const std::vector<double>& powers_linear,
                          const std::vector<int>& group, int user);

/// SINR of `user` in `group` under receive vector v, true near-field channels.
double sinr(const Eigen::VectorXcd& v, const std::vector<UserChannel>& users,
            const std::vector<double>& powers_linear,
            const std::vector<int>& group, int user);

/// Channel correlation |a^H b| / (||a|| ||b||) in [0, 1].
double correlation(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b);

struct UserSinrReport {
  int user = 0;
  int rb = 0;
  double sinr_linear = 0.0;
  double rate_bps_hz = 0.0;
};

/// Sum of the per-RB rates of one group.
double group_rate(const BeamformerSpec& spec, const std::vector<UserChannel>& users,
                  const std::vector<double>& powers_linear,
                  const std::vector<int>& group,
                  std::vector<UserSinrReport>* reports = nullptr, int rb = 0);

/// Achievable sum rate over all RBs for a per-user RB assignment.  Throws
/// DomainError when the assignment is not a partition of the users onto
/// [0, num_rbs).
double sum_rate(const std::vector<int>& rb_of_user, int num_rbs,
                const BeamformerSpec& spec, const std::vector<UserChannel>& users,
                const std::vector<double>& powers_linear,
                std::vector<UserSinrReport>* reports = nullptr,
                std::vector<double>* per_rb_rate = nullptr);

}  // namespace xlmimo

#endif  // XLMIMO_BEAMFORMING_HPP
