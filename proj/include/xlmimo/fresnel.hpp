// SPDX-License-Identifier: Apache-2.0
//
// xlmimo: near-field beam focusing and user grouping for modular XL-MIMO
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#ifndef XLMIMO_FRESNEL_HPP
#define XLMIMO_FRESNEL_HPP

#include <complex>

namespace xlmimo {

/// Fresnel integral F(x) = C(x) + j S(x) with C(x) = int_0^x cos(t^2) dt and
/// S(x) = int_0^x sin(t^2) dt (no pi/2 normalization).  Odd in x, bounded,
/// F(x) -> sqrt(pi/8) (1 + j) as x -> +inf.  Absolute error below 1e-12:
/// Maclaurin series for |x| <= 3.2, complex continued fraction of the
/// auxiliary function erfc(x e^{-j pi/4}) beyond.
std::complex<double> fresnel(double x);

}  // namespace xlmimo

#endif  // XLMIMO_FRESNEL_HPP
