// SPDX-License-Identifier: Apache-2.0
//
// xlmimo: near-field beam focusing and user grouping for modular XL-MIMO
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#ifndef XLMIMO_GEOMETRY_HPP
#define XLMIMO_GEOMETRY_HPP

#include <cmath>
#include <cstddef>

#include "xlmimo/errors.hpp"

namespace xlmimo {

/// Position of a user, scatterer, or observation point in the array's polar
/// frame: distance r from the array center and angle theta from boresight.
struct PolarLocation {
  double r_m = 0.0;
  double theta_rad = 0.0;

  double sin_theta() const { return std::sin(theta_rad); }
  double cos_theta() const { return std::cos(theta_rad); }
  void validate() const;
};

/// Aperture sizes and the field-region thresholds they imply.
struct ApertureMetrics {
  double module_size_m = 0.0;       // S = (M-1) d
  double aperture_m = 0.0;          // D = [(N-1)*Gamma + (M-1)] d
  double rayleigh_full_m = 0.0;     // 2 D^2 / lambda
  double rayleigh_module_m = 0.0;   // 2 S^2 / lambda
  double extended_ff_bound_m = 0.0; // max{5 D, 4 S D / lambda}
  double amplitude_bound_m = 0.0;   // 1.2 D
};

/// Propagation regime of an observation distance relative to the array.
enum class FieldRegion {
  kFarField,                // r >= 2 D^2 / lambda
  kSubArrayUswCommonAoA,    // max{5D, 4SD/lambda} <= r < 2 D^2 / lambda
  kSubArrayUswDistinctAoA,  // 2 S^2 / lambda <= r < max{5D, 4SD/lambda}
  kNuswNear,                // below the per-module Rayleigh distance
};

const char* to_string(FieldRegion region);

/// Modular uniform linear array: N modules of M elements along the y-axis,
/// element pitch d, module pitch Gamma*d, centered on the origin.  Index
/// values are centered, so for odd counts they are the usual symmetric
/// integers {0, +-1, ...}; even counts yield half-integer offsets.  Even
/// counts are accepted because the reference configurations (N=4 or M=4
/// modules/elements) require them; closed-form patterns are unaffected since
/// they depend only on the centered arithmetic progression of positions.
class ArrayGeometry {
 public:
  ArrayGeometry(int num_modules, int elements_per_module, int gamma, double d_m,
                double lambda_m);

  static ArrayGeometry half_wavelength(int num_modules, int elements_per_module,
                                       int gamma, double lambda_m) {
    return ArrayGeometry(num_modules, elements_per_module, gamma, lambda_m / 2.0,
                         lambda_m);
  }

  /// The collocated comparator with the same element count (Gamma = M).
  ArrayGeometry collocated() const {
    return ArrayGeometry(num_modules_, elements_per_module_, elements_per_module_,
                         d_m_, lambda_m_);
  }

  int num_modules() const { return num_modules_; }
  int elements_per_module() const { return elements_per_module_; }
  int num_elements() const { return num_modules_ * elements_per_module_; }
  int gamma() const { return gamma_; }
  double d_m() const { return d_m_; }
  double lambda_m() const { return lambda_m_; }
  double d_over_lambda() const { return d_m_ / lambda_m_; }  // dbar

  /// Centered module index value for slot in [0, N).
  double module_index(int slot) const {
    check_domain(slot >= 0 && slot < num_modules_, "module slot out of range");
    return slot - 0.5 * (num_modules_ - 1);
  }
  /// Centered element index value for slot in [0, M).
  double element_index(int slot) const {
    check_domain(slot >= 0 && slot < elements_per_module_,
                 "element slot out of range");
    return slot - 0.5 * (elements_per_module_ - 1);
  }

  /// y_{n,m} = (n Gamma + m) d for centered index values n, m.  Indices are
  /// validated against the centered sets (integer for odd counts).
  double element_position_m(double n, double m) const;

  /// y_n = n Gamma d, the reference (center) element of module n.
  double module_position_m(double n) const;

  /// Exact distance from a location to element (n, m).
  double element_distance_m(const PolarLocation& loc, double n, double m) const;

  /// Distance r_n from a location to the reference element of module n.
  double module_distance_m(const PolarLocation& loc, double n) const;

  /// sin(theta_n) of a location viewed from module n; always in [-1, 1].
  double module_angle_sine(const PolarLocation& loc, double n) const;

  ApertureMetrics aperture_metrics() const;
  FieldRegion classify_region(double r_m) const;

 private:
  double checked_module_index(double n) const;
  double checked_element_index(double m) const;

  int num_modules_;
  int elements_per_module_;
  int gamma_;
  double d_m_;
  double lambda_m_;
};

/// Distance helper shared by geometry and response code paths:
/// sqrt(r^2 - 2 r y sin(theta) + y^2).
inline double distance_to_offset_m(double r_m, double sin_theta, double y_m) {
  return std::sqrt(r_m * r_m - 2.0 * r_m * y_m * sin_theta + y_m * y_m);
}

}  // namespace xlmimo

#endif  // XLMIMO_GEOMETRY_HPP
