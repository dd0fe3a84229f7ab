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

// Translational point-mass dynamics m r'' = f - m g n3 + d, the disturbance
// models that drive it, and a fixed-step RK4 stepper.

#pragma once

#include <functional>
#include <optional>
#include <variant>
#include <vector>

#include "flyer/common.hpp"
#include "flyer/rbf.hpp"

namespace flyer {

struct SimState {
  Vec3 r = Vec3::Zero();  // CoM position in the inertial frame, m
  Vec3 v = Vec3::Zero();  // m/s
  double t = 0.0;         // s

  StateVec x() const {
    StateVec out;
    out << r, v;
    return out;
  }
};

struct StateDerivative {
  Vec3 r_dot = Vec3::Zero();
  Vec3 v_dot = Vec3::Zero();
};

struct PlantParams {
  double mass = 9.5e-5;  // kg
  double gravity = 9.81;  // m/s^2
  std::optional<double> force_limit;  // N, magnitude clamp when set

  void Validate() const;
};

struct ZeroDisturbance {};

struct ConstantBias {
  Vec3 bias = Vec3::Zero();  // N
};

// amplitude (.) sin(2 pi f t + phase), per axis.
struct Sinusoid {
  Vec3 amplitude = Vec3::Zero();  // N
  double frequency = 0.0;         // Hz
  double phase = 0.0;             // rad
};

// stiffness * (anchor - r).
struct TetherSpring {
  Vec3 anchor = Vec3::Zero();  // m
  double stiffness = 0.0;      // N/m
};

// d = W^T phi(x) exactly.
struct RbfTruth {
  RbfNetwork network;
  WeightMatrix weights;
};

struct DisturbanceSource;

// Sum of its terms.
struct Composite {
  std::vector<DisturbanceSource> terms;
};

struct DisturbanceSource {
  std::variant<ZeroDisturbance, ConstantBias, Sinusoid, TetherSpring, RbfTruth,
               Composite>
      kind;
};

// Throws ConfigError for non-finite parameters, negative stiffness or
// frequency, or mismatched RbfTruth shapes.
void ValidateDisturbance(const DisturbanceSource& src);

Vec3 DisturbanceEval(const DisturbanceSource& src, const StateVec& x, double t);

// The true weights when `src` is a single RbfTruth term over `net`, so that
// W_tilde (and hence the full Lyapunov function) is defined.
std::optional<WeightMatrix> KnownWeights(const DisturbanceSource& src,
                                         const RbfNetwork& net);

StateDerivative DynamicsDeriv(const SimState& s, const Vec3& f, const Vec3& d,
                              const PlantParams& p);

// Scales f down to the force limit (if any), preserving direction.
Vec3 ClampForce(const Vec3& f, const PlantParams& p);

using ForceFn = std::function<Vec3(const SimState&, double)>;

// Classical RK4 step; force_fn is re-evaluated at every stage and clamped.
// Throws DivergenceError if the result is not finite.
SimState Rk4Step(const SimState& s, double dt, const ForceFn& force_fn,
                 const DisturbanceSource& dist, const PlantParams& p);

}  // namespace flyer
