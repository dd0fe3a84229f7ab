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

#include "flyer/rbf.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace flyer {

RbfNetwork::RbfNetwork(std::vector<StateVec> centers,
                       std::vector<double> bandwidths)
    : centers_(std::move(centers)), bandwidths_(std::move(bandwidths)) {
  if (centers_.empty()) {
    throw ConfigError("RBF network needs at least one kernel");
  }
  if (centers_.size() != bandwidths_.size()) {
    throw ShapeError("RBF network: " + std::to_string(centers_.size()) +
                     " centers but " + std::to_string(bandwidths_.size()) +
                     " bandwidths");
  }
  for (std::size_t i = 0; i < centers_.size(); ++i) {
    if (!centers_[i].allFinite()) {
      throw ConfigError("RBF center " + std::to_string(i) + " is not finite");
    }
    if (!(bandwidths_[i] > 0.0) || !std::isfinite(bandwidths_[i])) {
      throw ConfigError("RBF bandwidth " + std::to_string(i) +
                        " must be finite and > 0");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (centers_[i] == centers_[j]) {
        throw ConfigError("RBF centers " + std::to_string(j) + " and " +
                          std::to_string(i) + " coincide");
      }
    }
  }
}

bool operator==(const RbfNetwork& a, const RbfNetwork& b) {
  return a.centers_ == b.centers_ && a.bandwidths_ == b.bandwidths_;
}

WeightMatrix::WeightMatrix(Storage entries) : entries_(std::move(entries)) {
  if (entries_.rows() < 1) {
    throw ShapeError("weight matrix needs at least one row");
  }
  if (!entries_.allFinite()) {
    throw DomainError("weight matrix has non-finite entries");
  }
}

WeightMatrix WeightMatrix::Zero(std::size_t n) {
  return WeightMatrix(Storage::Zero(static_cast<Eigen::Index>(n), 3));
}

Eigen::VectorXd EvalPhi(const StateVec& x, const RbfNetwork& net) {
  if (!x.allFinite()) {
    throw DomainError("EvalPhi: state is not finite");
  }
  const auto& centers = net.centers();
  const auto& sigmas = net.bandwidths();
  Eigen::VectorXd phi(static_cast<Eigen::Index>(centers.size()));
  for (std::size_t i = 0; i < centers.size(); ++i) {
    const double s = sigmas[i];
    phi[static_cast<Eigen::Index>(i)] =
        std::exp(-(x - centers[i]).squaredNorm() / (2.0 * s * s));
  }
  return phi;
}

Vec3 EvalForce(const WeightMatrix& w, const Eigen::VectorXd& phi) {
  if (static_cast<std::size_t>(phi.size()) != w.rows()) {
    throw ShapeError("EvalForce: weights have " + std::to_string(w.rows()) +
                     " rows but phi has " + std::to_string(phi.size()));
  }
  return w.matrix().transpose() * phi;
}

RbfNetwork BuildGridNetwork(const GridSpec& spec) {
  if (!spec.lo.allFinite() || !spec.hi.allFinite()) {
    throw ConfigError("grid box is not finite");
  }
  if (!(spec.sigma_scale > 0.0) || !std::isfinite(spec.sigma_scale)) {
    throw ConfigError("grid sigma_scale must be finite and > 0");
  }
  std::size_t n = 1;
  double spacing = 0.0;
  double extent = 0.0;
  for (int k = 0; k < 6; ++k) {
    const int count = spec.counts[k];
    const double width = spec.hi[k] - spec.lo[k];
    if (count < 1) {
      throw ConfigError("grid count on axis " + std::to_string(k) +
                        " must be >= 1");
    }
    if (width < 0.0 || (count > 1 && width <= 0.0)) {
      throw ConfigError("grid box is empty on axis " + std::to_string(k));
    }
    n *= static_cast<std::size_t>(count);
    extent = std::max(extent, width);
    if (count > 1) spacing = std::max(spacing, width / (count - 1));
  }
  if (spacing == 0.0) spacing = extent;
  if (spacing == 0.0) {
    throw ConfigError("grid box is a single point; bandwidth undefined");
  }

  std::vector<StateVec> centers;
  centers.reserve(n);
  std::array<int, 6> idx{};
  for (std::size_t flat = 0; flat < n; ++flat) {
    StateVec c;
    for (int k = 0; k < 6; ++k) {
      const int count = spec.counts[k];
      c[k] = count == 1
                 ? 0.5 * (spec.lo[k] + spec.hi[k])
                 : spec.lo[k] + (spec.hi[k] - spec.lo[k]) * idx[k] / (count - 1);
    }
    centers.push_back(c);
    for (int k = 0; k < 6; ++k) {
      if (++idx[k] < spec.counts[k]) break;
      idx[k] = 0;
    }
  }
  return RbfNetwork(std::move(centers),
                    std::vector<double>(n, spec.sigma_scale * spacing));
}

}  // namespace flyer
