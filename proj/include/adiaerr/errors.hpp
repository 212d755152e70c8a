// Copyright 2026 The adiaerr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace adiaerr {

/// Malformed input: bad arguments, mismatched runs, unreadable configs.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Model outside what an engine can represent.
class UnsupportedModel : public InputError {
 public:
  using InputError::InputError;
};

/// Non-finite amplitudes, loss of antisymmetry and similar breakdowns.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Iterative method ran out of budget.
class ConvergenceError : public NumericalError {
 public:
  ConvergenceError(const std::string& what, double last_slope)
      : NumericalError(what), last_slope_(last_slope) {}
  double last_slope() const { return last_slope_; }

 private:
  double last_slope_;
};

/// Problem too large for the configured caps (Hilbert space, bond dimension).
class CapacityError : public std::runtime_error {
 public:
  explicit CapacityError(const std::string& what, double time = 0.0)
      : std::runtime_error(what), time_(time) {}
  double time() const { return time_; }

 private:
  double time_;
};

}  // namespace adiaerr
