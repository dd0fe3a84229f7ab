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

// Gaussian radial-basis-function features over the translational state
// x = [r; v] and the linear-in-parameters force map W^T phi(x).

#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include <Eigen/Core>

#include "flyer/common.hpp"

namespace flyer {

// A set of n Gaussian kernels over the 6-dimensional state. Immutable once
// constructed; the constructor enforces n >= 1, finite distinct centers and
// strictly positive bandwidths.
class RbfNetwork {
 public:
  RbfNetwork(std::vector<StateVec> centers, std::vector<double> bandwidths);

  std::size_t size() const { return centers_.size(); }
  const std::vector<StateVec>& centers() const { return centers_; }
  const std::vector<double>& bandwidths() const { return bandwidths_; }

  friend bool operator==(const RbfNetwork& a, const RbfNetwork& b);

 private:
  std::vector<StateVec> centers_;
  std::vector<double> bandwidths_;
};

// n x 3 force weights (N per unit feature). Used for the true disturbance
// weights W, the estimate W_hat and the error W_tilde = W_hat - W.
class WeightMatrix {
 public:
  using Storage = Eigen::Matrix<double, Eigen::Dynamic, 3>;

  explicit WeightMatrix(Storage entries);
  static WeightMatrix Zero(std::size_t n);

  std::size_t rows() const { return static_cast<std::size_t>(entries_.rows()); }
  const Storage& matrix() const { return entries_; }
  double FrobeniusNorm() const { return entries_.norm(); }

 private:
  Storage entries_;
};

// phi_i(x) = exp(-|x - c_i|^2 / (2 sigma_i^2)). Throws DomainError on a
// non-finite x.
Eigen::VectorXd EvalPhi(const StateVec& x, const RbfNetwork& net);

// W^T phi, in newtons. Throws ShapeError when phi.size() != w.rows().
Vec3 EvalForce(const WeightMatrix& w, const Eigen::VectorXd& phi);

// Regular grid of centers over [lo, hi] with counts[k] points on axis k.
// Axis 0 varies fastest. An axis with a single point sits at the box
// midpoint and may be collapsed (lo == hi). All kernels share
// sigma = sigma_scale * (largest grid spacing among axes with >1 point).
struct GridSpec {
  StateVec lo = StateVec::Zero();
  StateVec hi = StateVec::Zero();
  std::array<int, 6> counts{1, 1, 1, 1, 1, 1};
  double sigma_scale = 1.0;
};

RbfNetwork BuildGridNetwork(const GridSpec& spec);

}  // namespace flyer
