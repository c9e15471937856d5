// SPDX-License-Identifier: Apache-2.0
//
// xlmimo: near-field beam focusing and user grouping for modular XL-MIMO
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#ifndef XLMIMO_SCHEDULER_HPP
#define XLMIMO_SCHEDULER_HPP

#include <cstdint>
#include <vector>

#include "xlmimo/beamforming.hpp"

namespace xlmimo {

/// A partition of K users onto Q resource blocks: every user appears in
/// exactly one RB.
struct GroupingAssignment {
  std::vector<int> rb_of_user;  // size K, values in [0, num_rbs)
  int num_rbs = 0;
  double sum_rate_bps_hz = 0.0;

  std::vector<std::vector<int>> groups() const;
  void validate() const;
};

/// Greedy user grouping: users are visited in a seeded random order and each
/// is placed in the RB that maximizes the resulting total sum rate, with ties
/// broken toward the lowest RB index.  Beamformers are fully recomputed for
/// every candidate placement.  Deterministic given (seed, spec).
GroupingAssignment greedy_grouping(const std::vector<UserChannel>& users,
                                   const std::vector<double>& powers_linear,
                                   int num_rbs, const BeamformerSpec& spec,
                                   std::uint64_t seed);

/// Baseline: each user assigned to an RB uniformly and independently.
GroupingAssignment random_grouping(int num_users, int num_rbs, std::uint64_t seed);

struct GroupingEvaluation {
  double sum_rate_bps_hz = 0.0;
  std::vector<double> per_rb_rate;
  std::vector<UserSinrReport> per_user;
};

/// Recompute the sum rate and per-user reports of an assignment.
GroupingEvaluation evaluate_grouping(const GroupingAssignment& assignment,
                                     const std::vector<UserChannel>& users,
                                     const std::vector<double>& powers_linear,
                                     const BeamformerSpec& spec);

}  // namespace xlmimo

#endif  // XLMIMO_SCHEDULER_HPP
