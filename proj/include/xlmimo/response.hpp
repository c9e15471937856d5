// SPDX-License-Identifier: Apache-2.0
//
// xlmimo: near-field beam focusing and user grouping for modular XL-MIMO
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#ifndef XLMIMO_RESPONSE_HPP
#define XLMIMO_RESPONSE_HPP

#include <Eigen/Dense>
#include <complex>
#include <iosfwd>

#include "xlmimo/geometry.hpp"

namespace xlmimo {

enum class ResponseModel {
  kNusw,             // exact per-element phase and amplitude
  kUsw,              // exact per-element phase, unit amplitude
  kUpw,              // linear phase (plane wave), unit amplitude
  kSubarrayDistinct, // per-module exact phase, per-module plane wave
  kSubarrayCommon,   // per-module exact phase, shared plane wave
};

enum class KernelKind {
  kSparseUpwP,     // p(theta): N-element sparse ULA, pitch Gamma*d
  kCollocatedUpwB, // b(theta): M-element collocated ULA, pitch d
  kSparseUswE,     // e(r, theta): N-element sparse ULA, spherical phase
};

/// Complex array response of length N*M, ordered module-major then element,
/// both ascending in centered index value.  That ordering is part of the CSV
/// contract of write_response_csv().
struct ArrayResponse {
  Eigen::VectorXcd entries;
  ResponseModel model = ResponseModel::kUsw;
};

/// One Kronecker factor of the separable response models.
struct SteeringKernel {
  Eigen::VectorXcd entries;
  KernelKind kind = KernelKind::kCollocatedUpwB;
};

// Response models. The UPW response drops the common factor exp(-j 2 pi r /
// lambda); every pattern quantity is the magnitude of an inner product, so
// global phases never matter and cross-model comparisons must use |a1^H a2|.
ArrayResponse response_nusw(const ArrayGeometry& g, const PolarLocation& loc);
ArrayResponse response_usw(const ArrayGeometry& g, const PolarLocation& loc);
ArrayResponse response_upw(const ArrayGeometry& g, double theta_rad);
ArrayResponse response_subarray_distinct(const ArrayGeometry& g,
                                         const PolarLocation& loc);
ArrayResponse response_subarray_common(const ArrayGeometry& g,
                                       const PolarLocation& loc);

SteeringKernel kernel_p(const ArrayGeometry& g, double theta_rad);
SteeringKernel kernel_b(const ArrayGeometry& g, double theta_rad);
SteeringKernel kernel_b_from_sine(const ArrayGeometry& g, double sin_theta);
SteeringKernel kernel_e(const ArrayGeometry& g, const PolarLocation& loc);

/// CSV dump, columns n,m,re,im in the contract ordering.
void write_response_csv(std::ostream& os, const ArrayGeometry& g,
                        const ArrayResponse& response);

}  // namespace xlmimo

#endif  // XLMIMO_RESPONSE_HPP
