// SPDX-License-Identifier: Apache-2.0
//
// xlmimo: near-field beam focusing and user grouping for modular XL-MIMO
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#include "xlmimo/pattern.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

namespace xlmimo {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::complex<double> unit_phasor(double phase_rad) {
  return {std::cos(phase_rad), std::sin(phase_rad)};
}

}  // namespace

double beam_gain(const Eigen::VectorXcd& v, const Eigen::VectorXcd& a) {
  check_domain(v.size() == a.size(), "beam_gain: length mismatch");
  const double nv = v.norm();
  const double na = a.norm();
  check_domain(nv > 0.0 && na > 0.0, "beam_gain: zero vector");
  return std::min(1.0, std::abs(v.dot(a)) / (nv * na));
}

double dirichlet_kernel(int count, double spacing, double delta) {
  check(count >= 1, "dirichlet_kernel: count must be >= 1");
  check(spacing > 0.0, "dirichlet_kernel: spacing must be positive");
  const double u = spacing * delta;
  const double k = std::round(u);
  const double frac = u - k;  // |frac| <= 1/2, exact reduction
  const long long parity = std::llround(k) * (count - 1);
  const double sign = (parity & 1LL) ? -1.0 : 1.0;
  const double den = std::sin(kPi * frac);
  if (std::abs(den) < 1e-12) return sign;  // removable singularity
  return sign * std::sin(kPi * count * frac) / (count * den);
}

double pattern_ff_ff(const ArrayGeometry& g, double delta_theta, Evaluation eval) {
  check_domain(std::abs(delta_theta) <= 2.0 + 1e-12,
               "pattern_ff_ff: delta_theta must lie in [-2, 2]");
  if (eval == Evaluation::kClosedForm) {
    const double dbar = g.d_over_lambda();
    return std::abs(dirichlet_kernel(g.num_modules(), g.gamma() * dbar, delta_theta)) *
           std::abs(dirichlet_kernel(g.elements_per_module(), dbar, delta_theta));
  }
  // explicit double sum over all element positions
  std::complex<double> acc(0.0, 0.0);
  const double k = kTwoPi / g.lambda_m();
  for (int ns = 0; ns < g.num_modules(); ++ns) {
    const double yn = g.module_index(ns) * g.gamma() * g.d_m();
    for (int ms = 0; ms < g.elements_per_module(); ++ms) {
      const double y = yn + g.element_index(ms) * g.d_m();
      acc += unit_phasor(k * y * delta_theta);
    }
  }
  return std::abs(acc) / g.num_elements();
}

double pattern_nf_ff(const ArrayGeometry& g, double focus_theta_rad,
                     const PolarLocation& observe, NfVariant variant) {
  observe.validate();
  const double k = kTwoPi / g.lambda_m();
  const double sin_focus = std::sin(focus_theta_rad);
  const double dbar = g.d_over_lambda();
  switch (variant) {
    case NfVariant::kExact:
      return beam_gain(response_upw(g, focus_theta_rad), response_usw(g, observe));
    case NfVariant::kDistinct: {
      std::complex<double> acc(0.0, 0.0);
      for (int ns = 0; ns < g.num_modules(); ++ns) {
        const double n = g.module_index(ns);
        const double rn = g.module_distance_m(observe, n);
        const double sn = g.module_angle_sine(observe, n);
        acc += unit_phasor(-k * (rn + n * g.gamma() * g.d_m() * sin_focus)) *
               dirichlet_kernel(g.elements_per_module(), dbar, sn - sin_focus);
      }
      return std::abs(acc) / g.num_modules();
    }
    case NfVariant::kCommon: {
      std::complex<double> acc(0.0, 0.0);
      for (int ns = 0; ns < g.num_modules(); ++ns) {
        const double n = g.module_index(ns);
        const double rn = g.module_distance_m(observe, n);
        acc += unit_phasor(-k * (rn + n * g.gamma() * g.d_m() * sin_focus));
      }
      const double dth = observe.sin_theta() - sin_focus;
      return (std::abs(acc) / g.num_modules()) *
             std::abs(dirichlet_kernel(g.elements_per_module(), dbar, dth));
    }
    case NfVariant::kClosedForm:
      throw InvalidArgumentError(
          "pattern_nf_ff: no closed form for far-field beamforming");
  }
  throw InvalidArgumentError("pattern_nf_ff: unknown variant");
}

double pattern_nf_nf(const ArrayGeometry& g, const PolarLocation& focus,
                     const PolarLocation& observe, NfVariant variant) {
  focus.validate();
  observe.validate();
  const double k = kTwoPi / g.lambda_m();
  const double dbar = g.d_over_lambda();
  const int M = g.elements_per_module();
  const int N = g.num_modules();
  switch (variant) {
    case NfVariant::kExact:
      return beam_gain(response_usw(g, focus), response_usw(g, observe));
    case NfVariant::kDistinct: {
      std::complex<double> acc(0.0, 0.0);
      for (int ns = 0; ns < N; ++ns) {
        const double n = g.module_index(ns);
        const double drn =
            g.module_distance_m(observe, n) - g.module_distance_m(focus, n);
        const double dsn =
            g.module_angle_sine(observe, n) - g.module_angle_sine(focus, n);
        acc += unit_phasor(-k * drn) * dirichlet_kernel(M, dbar, dsn);
      }
      return std::abs(acc) / N;
    }
    case NfVariant::kCommon: {
      std::complex<double> acc(0.0, 0.0);
      for (int ns = 0; ns < N; ++ns) {
        const double n = g.module_index(ns);
        acc += unit_phasor(
            -k * (g.module_distance_m(observe, n) - g.module_distance_m(focus, n)));
      }
      const double dth = observe.sin_theta() - focus.sin_theta();
      return (std::abs(acc) / N) * std::abs(dirichlet_kernel(M, dbar, dth));
    }
    case NfVariant::kClosedForm: {
      const double dth = observe.sin_theta() - focus.sin_theta();
      const double co = observe.cos_theta();
      const double cf = focus.cos_theta();
      const double delta = co * co / observe.r_m - cf * cf / focus.r_m;
      const double hm = std::abs(dirichlet_kernel(M, dbar, dth));
      const double scale =
          std::abs(co * co / observe.r_m) + std::abs(cf * cf / focus.r_m);
      if (std::abs(delta) <= 1e-13 * scale) {
        // same distance ring: degenerates to the far-field Dirichlet product
        return std::abs(dirichlet_kernel(N, g.gamma() * dbar, dth)) * hm;
      }
      const double nu = -kPi * dbar * g.gamma() * g.gamma() * g.d_m() * delta;
      const double mu = kTwoPi * dbar * g.gamma() * dth;
      const double sq = std::sqrt(std::abs(nu));
      const std::complex<double> f =
          fresnel(sq * N / 2.0 + mu / (2.0 * sq)) +
          fresnel(sq * N / 2.0 - mu / (2.0 * sq));
      return std::min(1.0, std::abs(f) / (sq * N)) * hm;
    }
  }
  throw InvalidArgumentError("pattern_nf_nf: unknown variant");
}

double angular_resolution(const ArrayGeometry& g) {
  return 1.0 / (g.num_modules() * g.gamma() * g.d_over_lambda());
}

double angular_resolution_collocated(const ArrayGeometry& g) {
  return 1.0 / (g.num_modules() * g.elements_per_module() * g.d_over_lambda());
}

std::vector<double> grating_lobe_directions(const ArrayGeometry& g) {
  const double dt = g.gamma() * g.d_over_lambda();
  std::vector<double> dirs;
  if (dt <= 0.5) return dirs;  // half-wavelength pitch: no grating lobes
  for (int i = 1; i / dt <= 2.0; ++i) dirs.push_back(i / dt);
  for (int i = 1; i / dt < 2.0; ++i) dirs.push_back(-i / dt);
  std::sort(dirs.begin(), dirs.end());
  return dirs;
}

double distance_pattern(const ArrayGeometry& g, double theta_prime_rad, double z) {
  const double c = g.num_modules() * g.gamma() *
                   std::abs(std::cos(theta_prime_rad)) / 2.0 *
                   std::sqrt(kPi * g.d_over_lambda() * g.d_m());
  const double x = c * std::sqrt(std::abs(z));
  if (x < 1e-8) return 1.0;  // limit F(x)/x -> 1
  return std::min(1.0, std::abs(fresnel(x)) / x);
}

HalfPowerDistance half_power_distance(const ArrayGeometry& g,
                                      double theta_prime_rad) {
  const double c = std::cos(theta_prime_rad);
  // D ~ Gamma N d per the large-N statement; the exact aperture is not used.
  const double aperture = g.gamma() * g.num_modules() * g.d_m();
  HalfPowerDistance out;
  out.singular_direction = std::abs(std::abs(theta_prime_rad) - kPi / 2) < 1e-12;
  out.r_hp_m = out.singular_direction
                   ? 0.0
                   : 0.10 * c * c * 2.0 * aperture * aperture / g.lambda_m();
  return out;
}

DistanceResolution distance_resolution(const ArrayGeometry& g,
                                       const PolarLocation& focus) {
  focus.validate();
  const double r_hp = half_power_distance(g, focus.theta_rad).r_hp_m;
  const double rp = focus.r_m;
  DistanceResolution out;
  out.plus_m = rp < r_hp ? rp * rp / (r_hp - rp)
                         : std::numeric_limits<double>::infinity();
  out.minus_m = rp * rp / (r_hp + rp);
  return out;
}

double find_half_power(const std::function<double(double)>& curve, double lo,
                       double hi, double tol) {
  check(tol > 0.0, "find_half_power: tolerance must be positive");
  double flo = curve(lo) - 0.5;
  double fhi = curve(hi) - 0.5;
  check_domain(flo > 0.0 && fhi < 0.0,
               "find_half_power: bracket must satisfy curve(lo) > 1/2 > curve(hi)");
  while (std::abs(hi - lo) > tol) {
    const double mid = 0.5 * (lo + hi);
    if (curve(mid) - 0.5 > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<GridPeak> find_grid_peaks(const std::function<double(double)>& f,
                                      double lo, double hi, int points) {
  check(points >= 3, "find_grid_peaks: need at least 3 points");
  check(hi > lo, "find_grid_peaks: empty interval");
  const double step = (hi - lo) / (points - 1);
  std::vector<double> vals(points);
  for (int i = 0; i < points; ++i) vals[i] = f(lo + i * step);
  std::vector<GridPeak> peaks;
  for (int i = 1; i + 1 < points; ++i) {
    if (!(vals[i] > vals[i - 1] && vals[i] > vals[i + 1])) continue;
    const double den = vals[i - 1] - 2.0 * vals[i] + vals[i + 1];
    double off = den != 0.0 ? 0.5 * (vals[i - 1] - vals[i + 1]) / den : 0.0;
    off = std::clamp(off, -1.0, 1.0);
    const double x = lo + (i + off) * step;
    peaks.push_back({x, f(x)});
  }
  return peaks;
}

}  // namespace xlmimo
