// Copyright 2026 The Flyer MRAC Authors
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

#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace flyer {

using Vec3 = Eigen::Vector3d;
using StateVec = Eigen::Matrix<double, 6, 1>;
using Vec9 = Eigen::Matrix<double, 9, 1>;
using Mat3 = Eigen::Matrix3d;
using Mat9 = Eigen::Matrix<double, 9, 9>;
using Mat93 = Eigen::Matrix<double, 9, 3>;

// Error taxonomy. The CLI maps these onto its exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Non-finite or out-of-domain numeric input.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Mismatched matrix/vector dimensions.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Invalid configuration or parameter set.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Stability certification refused (non-Hurwitz A, non-SPD Q, ...).
class CertificationError : public Error {
 public:
  using Error::Error;
};

// Linear-algebra routine failed to converge.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// A simulated quantity became non-finite or left the representable range.
// Carries the simulation time of detection when known (NaN otherwise).
class DivergenceError : public Error {
 public:
  explicit DivergenceError(const std::string& what)
      : Error(what), time_(std::numeric_limits<double>::quiet_NaN()) {}
  DivergenceError(const std::string& what, double time)
      : Error(what + " (t = " + std::to_string(time) + " s)"), time_(time) {}
  double time() const { return time_; }

 private:
  double time_;
};

}  // namespace flyer
