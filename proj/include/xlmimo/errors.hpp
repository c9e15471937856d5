// SPDX-License-Identifier: Apache-2.0
//
// xlmimo: near-field beam focusing and user grouping for modular XL-MIMO
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#ifndef XLMIMO_ERRORS_HPP
#define XLMIMO_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace xlmimo {

/// Thrown when an argument violates a documented precondition.
class InvalidArgumentError : public std::invalid_argument {
 public:
  explicit InvalidArgumentError(const std::string& what) : std::invalid_argument(what) {}
};

/// Thrown when a value is outside the mathematical domain of an operation
/// (index outside the array, non-positive distance, invalid bisection bracket).
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// Thrown by ZF beamforming when the interferer matrix is rank deficient or the
/// desired channel lies in the interference subspace (e.g. duplicate users).
class DegenerateGeometryError : public std::runtime_error {
 public:
  explicit DegenerateGeometryError(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown on malformed configuration documents (unknown keys, bad ranges).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

inline void check(bool cond, const char* msg) {
  if (!cond) throw InvalidArgumentError(msg);
}

inline void check_domain(bool cond, const char* msg) {
  if (!cond) throw DomainError(msg);
}

}  // namespace xlmimo

#endif  // XLMIMO_ERRORS_HPP
