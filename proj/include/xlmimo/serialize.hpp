// SPDX-License-Identifier: Apache-2.0
//
// xlmimo: near-field beam focusing and user grouping for modular XL-MIMO
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#ifndef XLMIMO_SERIALIZE_HPP
#define XLMIMO_SERIALIZE_HPP

#include <json.hpp>

#include "xlmimo/scheduler.hpp"

namespace xlmimo {

/// Versioned scenario dump (users, paths, complex gains) for exact replay.
nlohmann::json scenario_to_json(const ScenarioConfig& cfg,
                                const std::vector<UserChannel>& users);

/// Rebuild users from a scenario document; channel vectors are resynthesized
/// from the stored path parameters and gains.
std::vector<UserChannel> scenario_from_json(const nlohmann::json& doc,
                                            const ArrayGeometry& geometry);

/// Assignment dump: seed, beamformer, per-user RB ids, sum rate, per-RB rates.
nlohmann::json assignment_to_json(const GroupingAssignment& assignment,
                                  std::uint64_t seed, const BeamformerSpec& spec,
                                  const std::vector<double>& per_rb_rate);

}  // namespace xlmimo

#endif  // XLMIMO_SERIALIZE_HPP
