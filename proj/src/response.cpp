// SPDX-License-Identifier: Apache-2.0
//
// xlmimo: near-field beam focusing and user grouping for modular XL-MIMO
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#include "xlmimo/response.hpp"

#include <cmath>
#include <numbers>
#include <ostream>

namespace xlmimo {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::complex<double> unit_phasor(double phase_rad) {
  return {std::cos(phase_rad), std::sin(phase_rad)};
}

}  // namespace

ArrayResponse response_nusw(const ArrayGeometry& g, const PolarLocation& loc) {
  loc.validate();
  const double k = kTwoPi / g.lambda_m();
  const double s = loc.sin_theta();
  ArrayResponse out{Eigen::VectorXcd(g.num_elements()), ResponseModel::kNusw};
  Eigen::Index idx = 0;
  for (int ns = 0; ns < g.num_modules(); ++ns) {
    const double yn = g.module_index(ns) * g.gamma() * g.d_m();
    for (int ms = 0; ms < g.elements_per_module(); ++ms) {
      const double y = yn + g.element_index(ms) * g.d_m();
      const double rnm = distance_to_offset_m(loc.r_m, s, y);
      out.entries[idx++] = (loc.r_m / rnm) * unit_phasor(-k * rnm);
    }
  }
  return out;
}

ArrayResponse response_usw(const ArrayGeometry& g, const PolarLocation& loc) {
  loc.validate();
  const double k = kTwoPi / g.lambda_m();
  const double s = loc.sin_theta();
  ArrayResponse out{Eigen::VectorXcd(g.num_elements()), ResponseModel::kUsw};
  Eigen::Index idx = 0;
  for (int ns = 0; ns < g.num_modules(); ++ns) {
    const double yn = g.module_index(ns) * g.gamma() * g.d_m();
    for (int ms = 0; ms < g.elements_per_module(); ++ms) {
      const double y = yn + g.element_index(ms) * g.d_m();
      out.entries[idx++] = unit_phasor(-k * distance_to_offset_m(loc.r_m, s, y));
    }
  }
  return out;
}

ArrayResponse response_upw(const ArrayGeometry& g, double theta_rad) {
  check_domain(std::abs(theta_rad) <= std::numbers::pi / 2 + 1e-12,
               "response_upw: theta must lie in [-pi/2, pi/2]");
  const double k = kTwoPi / g.lambda_m();
  const double s = std::sin(theta_rad);
  ArrayResponse out{Eigen::VectorXcd(g.num_elements()), ResponseModel::kUpw};
  Eigen::Index idx = 0;
  for (int ns = 0; ns < g.num_modules(); ++ns) {
    const double yn = g.module_index(ns) * g.gamma() * g.d_m();
    for (int ms = 0; ms < g.elements_per_module(); ++ms) {
      const double y = yn + g.element_index(ms) * g.d_m();
      out.entries[idx++] = unit_phasor(k * y * s);
    }
  }
  return out;
}

ArrayResponse response_subarray_distinct(const ArrayGeometry& g,
                                         const PolarLocation& loc) {
  loc.validate();
  const double k = kTwoPi / g.lambda_m();
  ArrayResponse out{Eigen::VectorXcd(g.num_elements()),
                    ResponseModel::kSubarrayDistinct};
  Eigen::Index idx = 0;
  for (int ns = 0; ns < g.num_modules(); ++ns) {
    const double n = g.module_index(ns);
    const double rn = g.module_distance_m(loc, n);
    const double sn = g.module_angle_sine(loc, n);
    const std::complex<double> block_phase = unit_phasor(-k * rn);
    for (int ms = 0; ms < g.elements_per_module(); ++ms) {
      const double m = g.element_index(ms);
      out.entries[idx++] = block_phase * unit_phasor(k * m * g.d_m() * sn);
    }
  }
  return out;
}

ArrayResponse response_subarray_common(const ArrayGeometry& g,
                                       const PolarLocation& loc) {
  loc.validate();
  const SteeringKernel e = kernel_e(g, loc);
  const SteeringKernel b = kernel_b_from_sine(g, loc.sin_theta());
  ArrayResponse out{Eigen::VectorXcd(g.num_elements()),
                    ResponseModel::kSubarrayCommon};
  Eigen::Index idx = 0;
  for (int ns = 0; ns < g.num_modules(); ++ns)
    for (int ms = 0; ms < g.elements_per_module(); ++ms)
      out.entries[idx++] = e.entries[ns] * b.entries[ms];
  return out;
}

SteeringKernel kernel_p(const ArrayGeometry& g, double theta_rad) {
  const double k = kTwoPi / g.lambda_m();
  const double s = std::sin(theta_rad);
  SteeringKernel out{Eigen::VectorXcd(g.num_modules()), KernelKind::kSparseUpwP};
  for (int ns = 0; ns < g.num_modules(); ++ns)
    out.entries[ns] = unit_phasor(k * g.module_index(ns) * g.gamma() * g.d_m() * s);
  return out;
}

SteeringKernel kernel_b(const ArrayGeometry& g, double theta_rad) {
  return kernel_b_from_sine(g, std::sin(theta_rad));
}

SteeringKernel kernel_b_from_sine(const ArrayGeometry& g, double sin_theta) {
  check_domain(std::abs(sin_theta) <= 1.0 + 1e-12,
               "kernel_b: |sin(theta)| must be <= 1");
  const double k = kTwoPi / g.lambda_m();
  SteeringKernel out{Eigen::VectorXcd(g.elements_per_module()),
                     KernelKind::kCollocatedUpwB};
  for (int ms = 0; ms < g.elements_per_module(); ++ms)
    out.entries[ms] = unit_phasor(k * g.element_index(ms) * g.d_m() * sin_theta);
  return out;
}

SteeringKernel kernel_e(const ArrayGeometry& g, const PolarLocation& loc) {
  loc.validate();
  const double k = kTwoPi / g.lambda_m();
  SteeringKernel out{Eigen::VectorXcd(g.num_modules()), KernelKind::kSparseUswE};
  for (int ns = 0; ns < g.num_modules(); ++ns)
    out.entries[ns] = unit_phasor(-k * g.module_distance_m(loc, g.module_index(ns)));
  return out;
}

void write_response_csv(std::ostream& os, const ArrayGeometry& g,
                        const ArrayResponse& response) {
  check(response.entries.size() == g.num_elements(),
        "write_response_csv: size mismatch");
  os << "n,m,re,im\n";
  Eigen::Index idx = 0;
  os.precision(17);
  for (int ns = 0; ns < g.num_modules(); ++ns) {
    for (int ms = 0; ms < g.elements_per_module(); ++ms, ++idx) {
      os << g.module_index(ns) << ',' << g.element_index(ms) << ','
         << response.entries[idx].real() << ',' << response.entries[idx].imag()
         << '\n';
    }
  }
}

}  // namespace xlmimo
