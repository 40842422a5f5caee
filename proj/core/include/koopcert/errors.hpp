// Copyright (c) 2026 koopcert developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace koopcert {

/// Input that violates a documented precondition (non-finite entries,
/// dimension mismatch, out-of-range parameter).
class InvalidInputError : public std::invalid_argument {
 public:
  explicit InvalidInputError(const std::string& what) : std::invalid_argument(what) {}
};

/// A simulated or rolled-out state left the finite range. Carries the
/// step index at which the blow-up was detected.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& what, long step)
      : std::runtime_error(what + " (step " + std::to_string(step) + ")"), step_(step) {}
  long step() const { return step_; }

 private:
  long step_;
};

/// Configuration that is syntactically valid but semantically inadmissible,
/// e.g. an error budget whose denominator eta - delta_b - |psi(0)| is not
/// positive.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace koopcert
