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

#include "flyer/controller.hpp"

#include <cmath>
#include <string>
#include <utility>

#include <unsupported/Eigen/MatrixFunctions>

#include "flyer/integrator.hpp"

namespace flyer {
namespace {

// Anything past this is treated as divergence before it can overflow.
constexpr double kStateBound = 1e6;

SimState Measured(const SimState& s, const Vec3& noise) {
  return {s.r + noise, s.v, s.t};
}

}  // namespace

ErrorState ErrorDerivatives(const ErrorState& es, const ReferenceSample& ref,
                            const SimState& s) {
  ErrorState out = es;
  out.xi_dot = ref.position - s.r;
  out.xi_ddot = ref.velocity - s.v;
  return out;
}

ControlOutput ComputeControl(const ReferenceSample& ref, const SimState& s,
                             const ErrorState& es, const WeightMatrix& w_hat,
                             const RbfNetwork& net, const GainSet& gains) {
  if (w_hat.rows() != net.size()) {
    throw ShapeError("adaptive weights have " + std::to_string(w_hat.rows()) +
                     " rows, network has " + std::to_string(net.size()) +
                     " kernels");
  }
  ControlOutput out;
  out.phi = EvalPhi(s.x(), net);
  out.adaptive = EvalForce(w_hat, out.phi);

  const Vec3 r_e = ref.position - s.r;
  const Vec3 r_e_dot = ref.velocity - s.v;
  Vec3 f = gains.kp.cwiseProduct(r_e) + gains.ki.cwiseProduct(es.xi) +
           gains.kd.cwiseProduct(r_e_dot) + gains.mass * ref.acceleration;
  f.z() += gains.mass * gains.gravity;
  out.force = f - out.adaptive;
  return out;
}

Vec9 ReferenceModelStep(const Vec9& z_r, const Mat9& a, double dt) {
  if (!(dt > 0.0)) throw DomainError("ReferenceModelStep: dt must be > 0");
  const Mat9 step = (a * dt).exp();
  return step * z_r;
}

Eigen::MatrixXd AdaptationRate(const Eigen::VectorXd& phi,
                               const Vec9& z_tilde, const Mat9& p,
                               const Mat93& b, double gamma) {
  // z~^T P^T B as a row 3-vector.
  const Eigen::RowVector3d row = z_tilde.transpose() * p.transpose() * b;
  return -gamma * phi * row;
}

WeightMatrix AdaptStep(const WeightMatrix& w_hat, const Eigen::VectorXd& phi,
                       const Vec9& z_tilde, const Mat9& p, const Mat93& b,
                       double gamma, double dt) {
  if (static_cast<std::size_t>(phi.size()) != w_hat.rows()) {
    throw ShapeError("AdaptStep: phi and W_hat disagree on n");
  }
  WeightMatrix::Storage next =
      w_hat.matrix() + dt * AdaptationRate(phi, z_tilde, p, b, gamma);
  if (!next.allFinite()) {
    throw DivergenceError("adaptive weight update is not finite");
  }
  return WeightMatrix(std::move(next));
}

LoopDesign MakeLoopDesign(const GainSet& gains, const PlantParams& plant,
                          const RbfNetwork& network, const Mat9& q,
                          ControllerKind kind, StepScheme scheme) {
  gains.Validate();
  plant.Validate();
  SystemMatrices system = AssembleAB(gains);
  LyapunovCert cert = SolveLyapunov(system.a, q);
  if (!gains.PositiveDefinite()) {
    throw ConfigError("K_p, K_i and K_d must be strictly positive");
  }
  return LoopDesign{gains, plant, network, std::move(system), std::move(cert),
                    kind, scheme};
}

MracLoop::MracLoop(LoopDesign design, DisturbanceSource disturbance,
                   ReferenceSignal reference)
    : design_(std::move(design)),
      disturbance_(std::move(disturbance)),
      reference_(std::move(reference)) {
  ValidateDisturbance(disturbance_);
  ValidateReference(reference_);
}

LoopBundle MracLoop::Initial(const SimState& start,
                             const Vec3& position_noise) const {
  LoopBundle b{start, Vec3::Zero(), Vec9::Zero(),
               WeightMatrix::Zero(design_.network.size())};
  const ReferenceSample ref = EvalReference(reference_, start.t);
  ErrorState es;
  es = ErrorDerivatives(es, ref, Measured(start, position_noise));
  b.z_r = es.z();
  return b;
}

LoopSignals MracLoop::EvaluateAt(const SimState& plant, const Vec3& xi,
                                 const Vec9& z_r, const WeightMatrix& w_hat,
                                 const Vec3& position_noise) const {
  LoopSignals sig;
  const SimState measured = Measured(plant, position_noise);
  sig.ref = EvalReference(reference_, plant.t);
  ErrorState es;
  es.xi = xi;
  es.z_r = z_r;
  sig.error = ErrorDerivatives(es, sig.ref, measured);
  sig.z_tilde = sig.error.z_tilde();
  sig.control = ComputeControl(sig.ref, measured, sig.error, w_hat,
                               design_.network, design_.gains);
  sig.disturbance = DisturbanceEval(disturbance_, plant.x(), plant.t);
  if (design_.kind == ControllerKind::kAdaptive) {
    sig.w_hat_dot =
        AdaptationRate(sig.control.phi, sig.z_tilde, design_.cert.p,
                       design_.system.b, design_.gains.gamma);
  } else {
    sig.w_hat_dot = Eigen::MatrixXd::Zero(
        static_cast<Eigen::Index>(design_.network.size()), 3);
  }
  return sig;
}

LoopSignals MracLoop::Evaluate(const LoopBundle& bundle,
                               const Vec3& position_noise) const {
  return EvaluateAt(bundle.plant, bundle.xi, bundle.z_r, bundle.w_hat,
                    position_noise);
}

Eigen::VectorXd MracLoop::Pack(const LoopBundle& bundle) const {
  const auto n = static_cast<Eigen::Index>(bundle.w_hat.rows());
  Eigen::VectorXd y(18 + 3 * n);
  y << bundle.plant.r, bundle.plant.v, bundle.xi, bundle.z_r,
      Eigen::Map<const Eigen::VectorXd>(bundle.w_hat.matrix().data(), 3 * n);
  return y;
}

LoopBundle MracLoop::Unpack(const Eigen::VectorXd& y, double t) const {
  const auto n = static_cast<Eigen::Index>(design_.network.size());
  if (y.size() != 18 + 3 * n) throw ShapeError("packed loop state size");
  WeightMatrix::Storage w =
      Eigen::Map<const WeightMatrix::Storage>(y.data() + 18, n, 3);
  return LoopBundle{SimState{y.segment<3>(0), y.segment<3>(3), t},
                    y.segment<3>(6), y.segment<9>(9),
                    WeightMatrix(std::move(w))};
}

Eigen::VectorXd MracLoop::Derivative(const Eigen::VectorXd& y, double t,
                                     const Vec3& position_noise) const {
  const auto n = static_cast<Eigen::Index>(design_.network.size());
  const SimState plant{y.segment<3>(0), y.segment<3>(3), t};
  const Eigen::Map<const WeightMatrix::Storage> w_map(y.data() + 18, n, 3);
  const LoopSignals sig = EvaluateAt(plant, y.segment<3>(6), y.segment<9>(9),
                                     WeightMatrix(w_map), position_noise);
  const Vec3 f = ClampForce(sig.control.force, design_.plant);
  const StateDerivative sd =
      DynamicsDeriv(plant, f, sig.disturbance, design_.plant);

  Eigen::VectorXd dy(y.size());
  dy << sd.r_dot, sd.v_dot, sig.error.xi_dot, design_.system.a * y.segment<9>(9),
      Eigen::Map<const Eigen::VectorXd>(sig.w_hat_dot.data(), 3 * n);
  return dy;
}

LoopBundle MracLoop::StepCoupled(const LoopBundle& b, double dt,
                                 const Vec3& noise) const {
  const Eigen::VectorXd next = Rk4Advance(
      Pack(b), b.plant.t, dt, [&](const Eigen::VectorXd& y, double t) {
        return Derivative(y, t, noise);
      });
  if (!next.allFinite() || next.cwiseAbs().maxCoeff() > kStateBound) {
    throw DivergenceError("closed-loop state diverged", b.plant.t + dt);
  }
  return Unpack(next, b.plant.t + dt);
}

LoopBundle MracLoop::StepSampled(const LoopBundle& b, double dt,
                                 const Vec3& noise) const {
  const LoopSignals sig = Evaluate(b, noise);
  const Vec3 f = ClampForce(sig.control.force, design_.plant);

  using Packed = Vec9;  // r, v, xi
  Packed y;
  y << b.plant.r, b.plant.v, b.xi;
  const Packed next = Rk4Advance(y, b.plant.t, dt, [&](const Packed& s,
                                                       double t) -> Packed {
    const SimState plant{s.segment<3>(0), s.segment<3>(3), t};
    const StateDerivative sd = DynamicsDeriv(
        plant, f, DisturbanceEval(disturbance_, plant.x(), t), design_.plant);
    const Vec3 r_e = EvalReference(reference_, t).position - (plant.r + noise);
    Packed out;
    out << sd.r_dot, sd.v_dot, r_e;
    return out;
  });

  LoopBundle out{SimState{next.segment<3>(0), next.segment<3>(3),
                          b.plant.t + dt},
                 next.segment<3>(6),
                 ReferenceModelStep(b.z_r, design_.system.a, dt), b.w_hat};
  if (design_.kind == ControllerKind::kAdaptive) {
    out.w_hat = AdaptStep(b.w_hat, sig.control.phi, sig.z_tilde,
                          design_.cert.p, design_.system.b,
                          design_.gains.gamma, dt);
  }
  if (!next.allFinite() || next.cwiseAbs().maxCoeff() > kStateBound ||
      !out.z_r.allFinite()) {
    throw DivergenceError("closed-loop state diverged", b.plant.t + dt);
  }
  return out;
}

LoopBundle MracLoop::Step(const LoopBundle& bundle, double dt,
                          const Vec3& position_noise) const {
  if (!(dt > 0.0)) throw DomainError("Step: dt must be > 0");
  try {
    return design_.scheme == StepScheme::kCoupledRk4
               ? StepCoupled(bundle, dt, position_noise)
               : StepSampled(bundle, dt, position_noise);
  } catch (const DivergenceError& e) {
    if (!std::isnan(e.time())) throw;
    throw DivergenceError(e.what(), bundle.plant.t + dt);
  } catch (const DomainError& e) {
    throw DivergenceError(e.what(), bundle.plant.t + dt);
  }
}

}  // namespace flyer
