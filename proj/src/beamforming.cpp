// SPDX-License-Identifier: Apache-2.0
//
// xlmimo: near-field beam focusing and user grouping for modular XL-MIMO
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#include "xlmimo/beamforming.hpp"

#include <algorithm>
#include <cmath>

namespace xlmimo {

namespace {

constexpr double kZfRankTol = 1e-10;

void check_group(const std::vector<UserChannel>& users,
                 const std::vector<double>& powers,
                 const std::vector<int>& group, int user) {
  check(!group.empty(), "beamforming: group must be non-empty");
  check(users.size() == powers.size(), "beamforming: powers size mismatch");
  bool member = false;
  for (int i : group) {
    check(i >= 0 && i < static_cast<int>(users.size()),
          "beamforming: group index out of range");
    member = member || i == user;
  }
  check(member, "beamforming: user must belong to the group");
}

}  // namespace

const char* to_string(Scheme s) {
  switch (s) {
    case Scheme::kMrc: return "mrc";
    case Scheme::kZf: return "zf";
    case Scheme::kMmse: return "mmse";
  }
  return "unknown";
}

const char* to_string(Csi c) {
  return c == Csi::kNearField ? "near_field" : "far_field";
}

Scheme scheme_from_string(const std::string& s) {
  if (s == "mrc") return Scheme::kMrc;
  if (s == "zf") return Scheme::kZf;
  if (s == "mmse") return Scheme::kMmse;
  throw InvalidArgumentError("unknown beamforming scheme: " + s);
}

Csi csi_from_string(const std::string& s) {
  if (s == "near_field") return Csi::kNearField;
  if (s == "far_field") return Csi::kFarField;
  throw InvalidArgumentError("unknown CSI kind: " + s);
}

Eigen::VectorXcd beamform(const BeamformerSpec& spec,
                          const std::vector<UserChannel>& users,
                          const std::vector<double>& powers_linear,
                          const std::vector<int>& group, int user) {
  check_group(users, powers_linear, group, user);
  const Eigen::VectorXcd& hk = csi_channel(users[user], spec.csi);
  check_domain(hk.norm() > 0.0, "beamform: zero desired channel");
  const Eigen::Index nm = hk.size();

  switch (spec.scheme) {
    case Scheme::kMrc:
      return hk.normalized();

    case Scheme::kZf: {
      const int j = static_cast<int>(group.size()) - 1;
      if (j == 0) return hk.normalized();
      Eigen::MatrixXcd b(nm, j);
      int col = 0;
      for (int i : group)
        if (i != user) b.col(col++) = csi_channel(users[i], spec.csi);
      Eigen::JacobiSVD<Eigen::MatrixXcd> svd(b, Eigen::ComputeThinU);
      const auto& sv = svd.singularValues();
      if (sv(0) <= 0.0 || sv(sv.size() - 1) < kZfRankTol * sv(0))
        throw DegenerateGeometryError(
            "ZF: interferer matrix is rank deficient (coincident users?)");
      const Eigen::MatrixXcd& u = svd.matrixU();
      Eigen::VectorXcd v = hk - u * (u.adjoint() * hk);
      if (v.norm() <= kZfRankTol * hk.norm())
        throw DegenerateGeometryError(
            "ZF: desired channel lies inside the interference subspace");
      return v.normalized();
    }

    case Scheme::kMmse: {
      Eigen::MatrixXcd c = Eigen::MatrixXcd::Identity(nm, nm);
      for (int i : group) {
        if (i == user) continue;
        const Eigen::VectorXcd& hi = csi_channel(users[i], spec.csi);
        c.noalias() += powers_linear[i] * hi * hi.adjoint();
      }
      Eigen::VectorXcd v = Eigen::LLT<Eigen::MatrixXcd>(c).solve(hk);
      return v.normalized();
    }
  }
  throw InvalidArgumentError("beamform: unknown scheme");
}

double sinr(const Eigen::VectorXcd& v, const std::vector<UserChannel>& users,
            const std::vector<double>& powers_linear,
            const std::vector<int>& group, int user) {
  check_group(users, powers_linear, group, user);
  check(std::abs(v.norm() - 1.0) < 1e-9, "sinr: beamformer must be unit norm");
  const double signal =
      powers_linear[user] * std::norm(v.dot(users[user].h_nf));
  double interference = 0.0;
  for (int i : group) {
    if (i == user) continue;
    interference += powers_linear[i] * std::norm(v.dot(users[i].h_nf));
  }
  return signal / (interference + 1.0);
}

double correlation(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
  check_domain(a.size() == b.size(), "correlation: length mismatch");
  const double na = a.norm();
  const double nb = b.norm();
  check_domain(na > 0.0 && nb > 0.0, "correlation: zero vector");
  return std::min(1.0, std::abs(a.dot(b)) / (na * nb));
}

double group_rate(const BeamformerSpec& spec, const std::vector<UserChannel>& users,
                  const std::vector<double>& powers_linear,
                  const std::vector<int>& group,
                  std::vector<UserSinrReport>* reports, int rb) {
  double rate = 0.0;
  for (int k : group) {
    const Eigen::VectorXcd v = beamform(spec, users, powers_linear, group, k);
    const double g = sinr(v, users, powers_linear, group, k);
    const double r = std::log2(1.0 + g);
    rate += r;
    if (reports) reports->push_back({k, rb, g, r});
  }
  return rate;
}

double sum_rate(const std::vector<int>& rb_of_user, int num_rbs,
                const BeamformerSpec& spec, const std::vector<UserChannel>& users,
                const std::vector<double>& powers_linear,
                std::vector<UserSinrReport>* reports,
                std::vector<double>* per_rb_rate) {
  check_domain(num_rbs >= 1, "sum_rate: need at least one RB");
  check_domain(rb_of_user.size() == users.size(),
               "sum_rate: assignment must cover every user exactly once");
  std::vector<std::vector<int>> groups(num_rbs);
  for (std::size_t k = 0; k < rb_of_user.size(); ++k) {
    const int q = rb_of_user[k];
    check_domain(q >= 0 && q < num_rbs, "sum_rate: RB index out of range");
    groups[q].push_back(static_cast<int>(k));
  }
  if (per_rb_rate) per_rb_rate->assign(num_rbs, 0.0);
  double total = 0.0;
  for (int q = 0; q < num_rbs; ++q) {
    if (groups[q].empty()) continue;
    const double rq = group_rate(spec, users, powers_linear, groups[q], reports, q);
    if (per_rb_rate) (*per_rb_rate)[q] = rq;
    total += rq;
  }
  return total;
}

}  // namespace xlmimo
