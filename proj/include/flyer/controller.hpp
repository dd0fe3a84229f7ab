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

// Position control law with RBF adaptive compensation, error-state
// bookkeeping, the reference model and the adaptation law, plus the
// synchronized closed-loop stepper that ties them to the plant.

#pragma once

#include <optional>

#include <Eigen/Core>

#include "flyer/common.hpp"
#include "flyer/gains.hpp"
#include "flyer/lyapunov.hpp"
#include "flyer/plant.hpp"
#include "flyer/rbf.hpp"
#include "flyer/reference.hpp"

namespace flyer {

// z = [xi; xi'; xi''] with xi = integral of r_e, xi' = r_e = r_d - r and
// xi'' = r_e' = r_d' - v. z_r is the reference-model state; z~ = z_r - z.
struct ErrorState {
  Vec3 xi = Vec3::Zero();
  Vec3 xi_dot = Vec3::Zero();
  Vec3 xi_ddot = Vec3::Zero();
  Vec9 z_r = Vec9::Zero();

  Vec9 z() const {
    Vec9 out;
    out << xi, xi_dot, xi_ddot;
    return out;
  }
  Vec9 z_tilde() const { return z_r - z(); }
};

// Refreshes xi_dot and xi_ddot from the reference and the (measured) state.
// xi and z_r are carried through unchanged.
ErrorState ErrorDerivatives(const ErrorState& es, const ReferenceSample& ref,
                            const SimState& s);

struct ControlOutput {
  Vec3 force = Vec3::Zero();     // total commanded force f
  Vec3 adaptive = Vec3::Zero();  // f_a = W_hat^T phi(x)
  Eigen::VectorXd phi;
};

// f = Kp r_e + Ki xi + Kd r_e' + m r_d'' + m g n3 - f_a.
// Throws ShapeError if w_hat and net disagree on n.
ControlOutput ComputeControl(const ReferenceSample& ref, const SimState& s,
                             const ErrorState& es, const WeightMatrix& w_hat,
                             const RbfNetwork& net, const GainSet& gains);

inline Vec3 ControlForce(const ReferenceSample& ref, const SimState& s,
                         const ErrorState& es, const WeightMatrix& w_hat,
                         const RbfNetwork& net, const GainSet& gains) {
  return ComputeControl(ref, s, es, w_hat, net, gains).force;
}

// Exact propagation of z_r' = A z_r over dt: exp(A dt) z_r.
Vec9 ReferenceModelStep(const Vec9& z_r, const Mat9& a, double dt);

// W_hat' = -gamma phi z~^T P^T B (n x 3).
Eigen::MatrixXd AdaptationRate(const Eigen::VectorXd& phi,
                               const Vec9& z_tilde, const Mat9& p,
                               const Mat93& b, double gamma);

// Explicit Euler: W_hat + dt * AdaptationRate(...). Throws DivergenceError if
// the update is not finite, ShapeError on mismatched n.
WeightMatrix AdaptStep(const WeightMatrix& w_hat, const Eigen::VectorXd& phi,
                       const Vec9& z_tilde, const Mat9& p, const Mat93& b,
                       double gamma, double dt);

enum class ControllerKind { kAdaptive, kBaseline };

enum class StepScheme {
  // Plant, xi, z_r and W_hat advance as one ODE under a single RK4 step; the
  // control law is re-evaluated at every stage.
  kCoupledRk4,
  // Control held at the step-start value; plant and xi by RK4, z_r by
  // ReferenceModelStep, W_hat by AdaptStep.
  kSampledEuler,
};

// Everything about a run that does not change while it runs.
struct LoopDesign {
  GainSet gains;
  PlantParams plant;
  RbfNetwork network;
  SystemMatrices system;
  LyapunovCert cert;
  ControllerKind kind = ControllerKind::kAdaptive;
  StepScheme scheme = StepScheme::kCoupledRk4;
};

// Assembles A, B and solves for P with the given Q. Throws
// CertificationError when the gains are not certifiable, ConfigError when
// they are not strictly positive.
LoopDesign MakeLoopDesign(const GainSet& gains, const PlantParams& plant,
                          const RbfNetwork& network, const Mat9& q,
                          ControllerKind kind,
                          StepScheme scheme = StepScheme::kCoupledRk4);

// Full simulation state: plant, integral of r_e, reference model, weights.
struct LoopBundle {
  SimState plant;
  Vec3 xi = Vec3::Zero();
  Vec9 z_r = Vec9::Zero();
  WeightMatrix w_hat = WeightMatrix::Zero(1);
};

// Quantities derived from a bundle at its own time.
struct LoopSignals {
  ReferenceSample ref;
  ErrorState error;
  Vec9 z_tilde = Vec9::Zero();
  ControlOutput control;
  Vec3 disturbance = Vec3::Zero();
  Eigen::MatrixXd w_hat_dot;
};

class MracLoop {
 public:
  MracLoop(LoopDesign design, DisturbanceSource disturbance,
           ReferenceSignal reference);

  const LoopDesign& design() const { return design_; }
  const DisturbanceSource& disturbance() const { return disturbance_; }
  const ReferenceSignal& reference() const { return reference_; }

  // xi = 0, W_hat = 0 and z_r = z(0), so z~(0) = 0.
  LoopBundle Initial(const SimState& start,
                     const Vec3& position_noise = Vec3::Zero()) const;

  // position_noise is added to the measured position seen by the controller;
  // the disturbance acts on the true state.
  LoopSignals Evaluate(const LoopBundle& bundle,
                       const Vec3& position_noise = Vec3::Zero()) const;

  // Throws DivergenceError (with time) if any state leaves the finite range.
  LoopBundle Step(const LoopBundle& bundle, double dt,
                  const Vec3& position_noise = Vec3::Zero()) const;

  // Packed layout: r(3) v(3) xi(3) z_r(9) vec(W_hat) column-major (3n).
  Eigen::VectorXd Pack(const LoopBundle& bundle) const;
  LoopBundle Unpack(const Eigen::VectorXd& y, double t) const;

  // Time derivative of the packed state under the continuous-time laws.
  Eigen::VectorXd Derivative(const Eigen::VectorXd& y, double t,
                             const Vec3& position_noise = Vec3::Zero()) const;

 private:
  LoopSignals EvaluateAt(const SimState& plant, const Vec3& xi,
                         const Vec9& z_r, const WeightMatrix& w_hat,
                         const Vec3& position_noise) const;
  LoopBundle StepCoupled(const LoopBundle& b, double dt,
                         const Vec3& noise) const;
  LoopBundle StepSampled(const LoopBundle& b, double dt,
                         const Vec3& noise) const;

  LoopDesign design_;
  DisturbanceSource disturbance_;
  ReferenceSignal reference_;
};

}  // namespace flyer
