// SPDX-License-Identifier: Apache-2.0
//
// xlmimo: near-field beam focusing and user grouping for modular XL-MIMO
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#ifndef XLMIMO_PATTERN_HPP
#define XLMIMO_PATTERN_HPP

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "xlmimo/fresnel.hpp"
#include "xlmimo/geometry.hpp"
#include "xlmimo/response.hpp"

namespace xlmimo {

/// Normalized beam focusing gain |v^H a| / (||v|| ||a||) in [0, 1]; equals 1
/// exactly iff v is a positive scalar multiple of a.  For the unit-modulus
/// response models this is the (1/MN)|v^H a| beam focusing pattern.
double beam_gain(const Eigen::VectorXcd& v, const Eigen::VectorXcd& a);

inline double beam_gain(const ArrayResponse& v, const ArrayResponse& a) {
  return beam_gain(v.entries, a.entries);
}

/// Dirichlet kernel sin(pi*count*u) / (count*sin(pi*u)) with u = spacing*delta,
/// signed, with the removable singularities at integer u evaluated as the
/// analytic limit (-1)^{(count-1) u}.
double dirichlet_kernel(int count, double spacing, double delta);

enum class Evaluation { kDirectSum, kClosedForm };

/// Far-field beam pattern at spatial-frequency difference delta (sin(theta) -
/// sin(theta')): the product of module-level and element-level Dirichlet
/// kernels, or the explicit double sum over all elements.
double pattern_ff_ff(const ArrayGeometry& g, double delta_theta,
                     Evaluation eval = Evaluation::kClosedForm);

enum class NfVariant {
  kExact,      // inner product of full response vectors
  kDistinct,   // per-module distances and per-module angles
  kCommon,     // per-module distances, shared angle
  kClosedForm, // Fresnel closed form (near-field beamforming only)
};

/// Near-field observation, far-field beamforming toward focus_theta.
double pattern_nf_ff(const ArrayGeometry& g, double focus_theta_rad,
                     const PolarLocation& observe, NfVariant variant);

/// Near-field observation, near-field beamforming toward a focus location.
double pattern_nf_nf(const ArrayGeometry& g, const PolarLocation& focus,
                     const PolarLocation& observe, NfVariant variant);

/// Angular resolution 1/(N Gamma dbar) and the collocated comparator
/// 1/(N M dbar).
double angular_resolution(const ArrayGeometry& g);
double angular_resolution_collocated(const ArrayGeometry& g);

/// Grating-lobe directions {i/(Gamma dbar), i != 0} inside the visible window
/// of spatial-frequency differences, ascending.  Empty when Gamma*dbar <= 1/2.
/// The window is half-open, (-2, 2], so the count matches floor(4*Gamma*dbar-1).
std::vector<double> grating_lobe_directions(const ArrayGeometry& g);

/// Distance-domain pattern E(z; theta') with z = 1/r - 1/r', an even function
/// of z with E(0) = 1.
double distance_pattern(const ArrayGeometry& g, double theta_prime_rad, double z);

struct HalfPowerDistance {
  double r_hp_m = 0.0;
  bool singular_direction = false;  // theta' = +-pi/2
};

/// Half-power effective distance r_hp = 0.10 cos^2(theta') 2 D^2 / lambda with
/// the large-N aperture D = Gamma N d.
HalfPowerDistance half_power_distance(const ArrayGeometry& g,
                                      double theta_prime_rad);

struct DistanceResolution {
  double plus_m = 0.0;   // +inf when r' >= r_hp
  double minus_m = 0.0;  // always finite
  double beam_width_m() const { return plus_m + minus_m; }
};

DistanceResolution distance_resolution(const ArrayGeometry& g,
                                       const PolarLocation& focus);

/// Bisection for curve(x) = 1/2 given curve(lo) > 1/2 > curve(hi); absolute
/// tolerance on x.
double find_half_power(const std::function<double(double)>& curve, double lo,
                       double hi, double tol = 1e-9);

struct GridPeak {
  double x = 0.0;
  double value = 0.0;
};

/// Strict interior local maxima of f sampled on a uniform grid, refined by a
/// quadratic fit through the winning cell.
std::vector<GridPeak> find_grid_peaks(const std::function<double(double)>& f,
                                      double lo, double hi, int points);

}  // namespace xlmimo

#endif  // XLMIMO_PATTERN_HPP
