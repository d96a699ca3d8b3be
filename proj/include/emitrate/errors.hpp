// Copyright 2026 The emitrate Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace emitrate {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A quadrature could not reach its tolerance within the node budget.
class NonConvergence : public Error {
 public:
  NonConvergence(const std::string& what, double err_estimate)
      : Error(what), err_estimate_(err_estimate) {}
  double err_estimate() const noexcept { return err_estimate_; }

 private:
  double err_estimate_;
};

/// Mirror reflection rate outside the range a route can handle (|r| >= 1).
class DegenerateMirror : public Error {
 public:
  using Error::Error;
};

/// Truncated reflection series whose tail bound exceeds the requested tolerance.
class TailTooLarge : public Error {
 public:
  TailTooLarge(const std::string& what, double tail_bound)
      : Error(what), tail_bound_(tail_bound) {}
  double tail_bound() const noexcept { return tail_bound_; }

 private:
  double tail_bound_;
};

class InvalidParams : public Error {
 public:
  using Error::Error;
};

/// Photon population reached the top of the Fock ladder.
class TruncationLeak : public Error {
 public:
  using Error::Error;
};

/// Fixed step violates dt * max(kappa, gamma, g) < 0.1.
class StepTooLarge : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace emitrate
