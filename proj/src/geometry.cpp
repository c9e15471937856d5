// SPDX-License-Identifier: Apache-2.0
//
// xlmimo: near-field beam focusing and user grouping for modular XL-MIMO
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#include "xlmimo/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace xlmimo {

namespace {
constexpr double kPiHalf = 1.57079632679489661923;
}

void PolarLocation::validate() const {
  check_domain(r_m > 0.0, "PolarLocation: r must be positive");
  check_domain(theta_rad >= -kPiHalf && theta_rad <= kPiHalf,
               "PolarLocation: theta must lie in [-pi/2, pi/2]");
}

const char* to_string(FieldRegion region) {
  switch (region) {
    case FieldRegion::kFarField: return "far_field";
    case FieldRegion::kSubArrayUswCommonAoA: return "subarray_usw_common_aoa";
    case FieldRegion::kSubArrayUswDistinctAoA: return "subarray_usw_distinct_aoa";
    case FieldRegion::kNuswNear: return "nusw_near";
  }
  return "unknown";
}

ArrayGeometry::ArrayGeometry(int num_modules, int elements_per_module, int gamma,
                             double d_m, double lambda_m)
    : num_modules_(num_modules),
      elements_per_module_(elements_per_module),
      gamma_(gamma),
      d_m_(d_m),
      lambda_m_(lambda_m) {
  check(num_modules >= 1, "ArrayGeometry: N must be >= 1");
  check(elements_per_module >= 1, "ArrayGeometry: M must be >= 1");
  check(gamma >= 1, "ArrayGeometry: Gamma must be >= 1");
  check(d_m > 0.0, "ArrayGeometry: d must be positive");
  check(lambda_m > 0.0, "ArrayGeometry: lambda must be positive");
}

double ArrayGeometry::checked_module_index(double n) const {
  const double slot = n + 0.5 * (num_modules_ - 1);
  check_domain(slot > -1e-9 && slot < num_modules_ - 1 + 1e-9 &&
                   std::abs(slot - std::round(slot)) < 1e-9,
               "module index outside the centered index set");
  return n;
}

double ArrayGeometry::checked_element_index(double m) const {
  const double slot = m + 0.5 * (elements_per_module_ - 1);
  check_domain(slot > -1e-9 && slot < elements_per_module_ - 1 + 1e-9 &&
                   std::abs(slot - std::round(slot)) < 1e-9,
               "element index outside the centered index set");
  return m;
}

double ArrayGeometry::element_position_m(double n, double m) const {
  checked_module_index(n);
  checked_element_index(m);
  return (n * gamma_ + m) * d_m_;
}

double ArrayGeometry::module_position_m(double n) const {
  checked_module_index(n);
  return n * gamma_ * d_m_;
}

double ArrayGeometry::element_distance_m(const PolarLocation& loc, double n,
                                         double m) const {
  loc.validate();
  return distance_to_offset_m(loc.r_m, loc.sin_theta(), element_position_m(n, m));
}

double ArrayGeometry::module_distance_m(const PolarLocation& loc, double n) const {
  loc.validate();
  return distance_to_offset_m(loc.r_m, loc.sin_theta(), module_position_m(n));
}

double ArrayGeometry::module_angle_sine(const PolarLocation& loc, double n) const {
  const double y_n = module_position_m(n);
  const double r_n = distance_to_offset_m(loc.r_m, loc.sin_theta(), y_n);
  const double s = (loc.r_m * loc.sin_theta() - y_n) / r_n;
  return std::clamp(s, -1.0, 1.0);
}

ApertureMetrics ArrayGeometry::aperture_metrics() const {
  ApertureMetrics am;
  am.module_size_m = (elements_per_module_ - 1) * d_m_;
  am.aperture_m =
      ((num_modules_ - 1) * gamma_ + (elements_per_module_ - 1)) * d_m_;
  am.rayleigh_full_m = 2.0 * am.aperture_m * am.aperture_m / lambda_m_;
  am.rayleigh_module_m = 2.0 * am.module_size_m * am.module_size_m / lambda_m_;
  am.extended_ff_bound_m = std::max(
      5.0 * am.aperture_m, 4.0 * am.module_size_m * am.aperture_m / lambda_m_);
  am.amplitude_bound_m = 1.2 * am.aperture_m;
  return am;
}

FieldRegion ArrayGeometry::classify_region(double r_m) const {
  check_domain(r_m > 0.0, "classify_region: r must be positive");
  const ApertureMetrics am = aperture_metrics();
  if (r_m >= am.rayleigh_full_m) return FieldRegion::kFarField;
  if (r_m >= am.extended_ff_bound_m) return FieldRegion::kSubArrayUswCommonAoA;
  if (r_m >= am.rayleigh_module_m) return FieldRegion::kSubArrayUswDistinctAoA;
  return FieldRegion::kNuswNear;
}

}  // namespace xlmimo
