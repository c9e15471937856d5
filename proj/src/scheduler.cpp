// SPDX-License-Identifier: Apache-2.0
//
// xlmimo: near-field beam focusing and user grouping for modular XL-MIMO
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#include "xlmimo/scheduler.hpp"

#include <cassert>
#include <limits>
#include <numeric>
#include <utility>

#include "xlmimo/rng.hpp"

namespace xlmimo {

std::vector<std::vector<int>> GroupingAssignment::groups() const {
  std::vector<std::vector<int>> out(num_rbs);
  for (std::size_t k = 0; k < rb_of_user.size(); ++k)
    out[rb_of_user[k]].push_back(static_cast<int>(k));
  return out;
}

void GroupingAssignment::validate() const {
  check_domain(num_rbs >= 1, "assignment: need at least one RB");
  for (int q : rb_of_user)
    check_domain(q >= 0 && q < num_rbs, "assignment: RB index out of range");
}

GroupingAssignment greedy_grouping(const std::vector<UserChannel>& users,
                                   const std::vector<double>& powers_linear,
                                   int num_rbs, const BeamformerSpec& spec,
                                   std::uint64_t seed) {
  check_domain(!users.empty(), "greedy_grouping: empty channel list");
  check(num_rbs >= 1, "greedy_grouping: need at least one RB");
  check(users.size() == powers_linear.size(),
        "greedy_grouping: powers size mismatch");
  const int num_users = static_cast<int>(users.size());

  // seeded visiting order (Fisher-Yates)
  std::vector<int> order(num_users);
  std::iota(order.begin(), order.end(), 0);
  rng::Stream perm(seed, rng::kGreedyOrderStream);
  for (int i = num_users - 1; i > 0; --i)
    std::swap(order[i], order[perm.next_below(i + 1)]);

  std::vector<std::vector<int>> groups(num_rbs);
  std::vector<double> rb_rate(num_rbs, 0.0);
  GroupingAssignment out;
  out.rb_of_user.assign(num_users, 0);
  out.num_rbs = num_rbs;

  for (int k : order) {
    double current_total = 0.0;
    for (double r : rb_rate) current_total += r;

    int best_q = -1;
    double best_sum = -std::numeric_limits<double>::infinity();
    double best_rq = 0.0;
    for (int q = 0; q < num_rbs; ++q) {
      std::vector<int> candidate = groups[q];
      candidate.push_back(k);
      double rq;
      try {
        rq = group_rate(spec, users, powers_linear, candidate);
      } catch (const DegenerateGeometryError&) {
        continue;  // ZF cannot serve this candidate group
      }
      const double total = current_total - rb_rate[q] + rq;
      if (total > best_sum) {  // strict: ties resolve to the lowest RB index
        best_sum = total;
        best_q = q;
        best_rq = rq;
      }
    }
    if (best_q < 0)
      throw DegenerateGeometryError(
          "greedy_grouping: every candidate placement is degenerate");
    assert(best_sum >= current_total - rb_rate[best_q] - 1e-12);
    groups[best_q].push_back(k);
    rb_rate[best_q] = best_rq;
    out.rb_of_user[k] = best_q;
  }

  out.sum_rate_bps_hz = 0.0;
  for (double r : rb_rate) out.sum_rate_bps_hz += r;
  return out;
}

GroupingAssignment random_grouping(int num_users, int num_rbs,
                                   std::uint64_t seed) {
  check(num_users >= 1, "random_grouping: need at least one user");
  check(num_rbs >= 1, "random_grouping: need at least one RB");
  GroupingAssignment out;
  out.num_rbs = num_rbs;
  out.rb_of_user.resize(num_users);
  rng::Stream draw(seed, rng::kRandomGroupingStream);
  for (int k = 0; k < num_users; ++k)
    out.rb_of_user[k] = static_cast<int>(draw.next_below(num_rbs));
  return out;
}

GroupingEvaluation evaluate_grouping(const GroupingAssignment& assignment,
                                     const std::vector<UserChannel>& users,
                                     const std::vector<double>& powers_linear,
                                     const BeamformerSpec& spec) {
  assignment.validate();
  check_domain(assignment.rb_of_user.size() == users.size(),
               "evaluate_grouping: assignment size mismatch");
  GroupingEvaluation eval;
  eval.sum_rate_bps_hz =
      sum_rate(assignment.rb_of_user, assignment.num_rbs, spec, users,
               powers_linear, &eval.per_user, &eval.per_rb_rate);
  return eval;
}

}  // namespace xlmimo
