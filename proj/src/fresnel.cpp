// SPDX-License-Identifier: Apache-2.0
//
// xlmimo: near-field beam focusing and user grouping for modular XL-MIMO
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#include "xlmimo/fresnel.hpp"

#include <cmath>
#include <numbers>

namespace xlmimo {

namespace {

using cplx = std::complex<double>;

constexpr double kSeriesLimit = 3.2;

// Maclaurin series:
//   C(x) = sum (-1)^k x^{4k+1} / ((2k)!   (4k+1))
//   S(x) = sum (-1)^k x^{4k+3} / ((2k+1)! (4k+3))
// The largest term at x = 3.2 is ~6e2, so double accumulation keeps the
// absolute error near 1e-13.
cplx fresnel_series(double x) {
  const double x4 = x * x * x * x;
  double uc = x;          // x^{4k+1} / (2k)!
  double us = x * x * x;  // x^{4k+3} / (2k+1)!
  double c = 0.0, s = 0.0;
  double sign = 1.0;
  for (int k = 0; k < 64; ++k) {
    const double tc = sign * uc / (4 * k + 1);
    const double ts = sign * us / (4 * k + 3);
    c += tc;
    s += ts;
    if (std::abs(tc) + std::abs(ts) < 1e-18 * (1.0 + std::abs(c) + std::abs(s)))
      break;
    uc *= x4 / ((2 * k + 1) * (2 * k + 2));
    us *= x4 / ((2 * k + 2) * (2 * k + 3));
    sign = -sign;
  }
  return {c, s};
}

// erfc(z) = Gamma(1/2, z^2) / sqrt(pi) evaluated by the modified Lentz
// continued fraction of the upper incomplete gamma function.  With
// z = x e^{-j pi/4} the prefactor e^{-z^2} = e^{j x^2} stays on the unit
// circle, so there is no overflow for any x.
cplx erfc_cf(cplx z) {
  const cplx z2 = z * z;
  constexpr double kTiny = 1e-300;
  const double a = 0.5;
  cplx b = z2 + 1.0 - a;
  cplx c_lentz(1.0 / kTiny, 0.0);
  cplx d = 1.0 / b;
  cplx h = d;
  for (int i = 1; i < 500; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c_lentz = b + an / c_lentz;
    if (std::abs(c_lentz) < kTiny) c_lentz = kTiny;
    d = 1.0 / d;
    const cplx del = d * c_lentz;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  return std::exp(-z2) * z * h / std::sqrt(std::numbers::pi);
}

cplx fresnel_large(double x) {
  // F(x) = sqrt(pi/8)(1+j) - (sqrt(pi)/2) e^{j pi/4} erfc(x e^{-j pi/4})
  static const double kRoot = std::sqrt(std::numbers::pi / 8.0);
  static const cplx kInfLimit(kRoot, kRoot);
  static const cplx kExpP(std::cos(std::numbers::pi / 4), std::sin(std::numbers::pi / 4));
  static const cplx kExpM = std::conj(kExpP);
  const cplx tail = 0.5 * std::sqrt(std::numbers::pi) * kExpP * erfc_cf(x * kExpM);
  return kInfLimit - tail;
}

}  // namespace

std::complex<double> fresnel(double x) {
  const double ax = std::abs(x);
  const cplx f = ax <= kSeriesLimit ? fresnel_series(ax) : fresnel_large(ax);
  return x < 0.0 ? -f : f;
}

}  // namespace xlmimo
