// SPDX-License-Identifier: Apache-2.0
//
// xlmimo: near-field beam focusing and user grouping for modular XL-MIMO
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>

#include "xlmimo/fresnel.hpp"

using namespace xlmimo;
using cplx = std::complex<double>;

namespace {

// test-side oracle: adaptive Simpson quadrature of the defining integrals
double simpson_rec(const std::function<double(double)>& f, double a, double b,
                   double fa, double fm, double fb, double whole, double tol,
                   int depth) {
  const double m = 0.5 * (a + b);
  const double flm = f(0.5 * (a + m)), frm = f(0.5 * (m + b));
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return simpson_rec(f, a, m, fa, flm, fm, left, tol / 2, depth - 1) +
         simpson_rec(f, m, b, fm, frm, fb, right, tol / 2, depth - 1);
}

double quad(const std::function<double(double)>& f, double a, double b) {
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  return simpson_rec(f, a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb),
                     1e-13, 44);
}

cplx fresnel_quadrature(double x) {
  double c = 0.0, s = 0.0;
  const int panels = std::max(1, (int)std::ceil(std::abs(x)));
  for (int p = 0; p < panels; ++p) {
    const double a = x * p / panels, b = x * (p + 1) / panels;
    c += quad([](double t) { return std::cos(t * t); }, a, b);
    s += quad([](double t) { return std::sin(t * t); }, a, b);
  }
  return {c, s};
}

}  // namespace

TEST_CASE("frozen reference values") {
  struct Ref {
    double x, c, s;
  };
  // frozen from 40-digit evaluations of the defining integrals
  const Ref refs[] = {
      {0.1, 0.099999000004629619, 0.00033333095238852813},
      {0.5, 0.49688402921479471, 0.041481024268547482},
      {1.0, 0.90452423790027208, 0.3102683017233811},
      {1.5, 0.89918485288747861, 0.7782378043068086},
      {1.95, 0.49767050068595103, 0.83913911029756014},
      {2.0, 0.46146146243321637, 0.80477648934375611},
      {3.0, 0.70286355773026873, 0.77356252689376902},
      {3.9, 0.69134715501158401, 0.73695770340527678},
      {4.0, 0.59446032749782298, 0.74713384464811466},
      {4.1, 0.5197593987480171, 0.68480540477868414},
      {5.0, 0.61146676639646261, 0.52791728116532241},
      {6.0, 0.54420402538718458, 0.63845918931501038},
      {8.0, 0.68395702750811393, 0.60172164493525558},
      {10.0, 0.60112518481344435, 0.58367089992962334},
      {25.0, 0.6301931374004698, 0.64634195976432536},
  };
  for (const Ref& r : refs) {
    const cplx f = fresnel(r.x);
    CHECK(std::abs(f.real() - r.c) < 1e-12);
    CHECK(std::abs(f.imag() - r.s) < 1e-12);
  }
}

TEST_CASE("zero and odd symmetry") {
  CHECK(fresnel(0.0) == cplx(0.0, 0.0));
  for (double x : {0.3, 1.1, 2.7, 3.2, 3.5, 7.9})
    CHECK(std::abs(fresnel(-x) + fresnel(x)) == doctest::Approx(0.0));
}

TEST_CASE("matches adaptive quadrature of the defining integrals") {
  for (double x :
       {0.05, 0.4, 1.0, 1.95, 2.6, 3.0, 3.19, 3.2, 3.21, 3.7, 4.5, 5.5, 9.0}) {
    const cplx diff = fresnel(x) - fresnel_quadrature(x);
    CHECK(std::abs(diff) < 1e-10);
  }
}

TEST_CASE("continuity across the series/continued-fraction switch") {
  const cplx lo = fresnel(3.2 - 1e-9);
  const cplx hi = fresnel(3.2 + 1e-9);
  CHECK(std::abs(lo - hi) < 1e-8);
}

TEST_CASE("large-argument limit") {
  const double lim = std::sqrt(std::numbers::pi / 8.0);
  for (double x : {50.0, 200.0, 1000.0}) {
    const cplx f = fresnel(x);
    // tail decays like 1/(2x)
    CHECK(std::abs(f - cplx(lim, lim)) < 0.6 / x);
  }
}

TEST_CASE("half-power constant near 1.95") {
  const double v = std::abs(fresnel(1.95)) / 1.95;
  CHECK(std::abs(v - 0.5) < 0.005);
}
