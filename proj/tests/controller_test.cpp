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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "flyer/integrator.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

namespace flyer {
namespace {

using testing::RandomWeights;
using testing::TrackingConfig;

constexpr double kMass = 9.5e-5;
constexpr double kG = 9.81;

class ControlLawTest : public ::testing::Test {
 protected:
  ControlLawTest()
      : net_({StateVec::Zero()}, {0.1}),
        gains_(GainSet::PolePlacement(kMass, kG, {6, 8, 10}, 1e-6)) {}

  RbfNetwork net_;
  GainSet gains_;
};

TEST_F(ControlLawTest, HoverFeedforwardOnly) {
  const ReferenceSample ref{Vec3(0, 0, 0.1), Vec3::Zero(), Vec3::Zero()};
  const SimState s{ref.position, Vec3::Zero(), 0.0};
  const Vec3 f =
      ControlForce(ref, s, ErrorState{}, WeightMatrix::Zero(1), net_, gains_);
  EXPECT_NEAR((f - Vec3(0, 0, kMass * kG)).norm(), 0.0, 1e-18);
}

TEST_F(ControlLawTest, AdaptiveTermIsSubtracted) {
  const ReferenceSample ref{};
  const SimState s{};  // at the single center, so phi = [1]
  WeightMatrix::Storage w(1, 3);
  w << 0, 0, 0.1;
  const ControlOutput out =
      ComputeControl(ref, s, ErrorState{}, WeightMatrix(w), net_, gains_);
  EXPECT_EQ(out.phi[0], 1.0);
  EXPECT_EQ(out.adaptive, Vec3(0, 0, 0.1));
  EXPECT_NEAR((out.force - Vec3(0, 0, kMass * kG - 0.1)).norm(), 0.0, 1e-17);
}

TEST_F(ControlLawTest, ProportionalTermByHand) {
  GainSet g = gains_;
  g.kp = Vec3(0.02, 0.0, 0.0);
  g.ki.setZero();
  g.kd.setZero();
  const ReferenceSample ref{Vec3(0.01, 0, 0), Vec3::Zero(), Vec3::Zero()};
  const Vec3 f = ControlForce(ref, SimState{}, ErrorState{},
                              WeightMatrix::Zero(1), net_, g);
  EXPECT_NEAR(f.x(), 2e-4, 1e-18);
  EXPECT_EQ(f.y(), 0.0);
  EXPECT_NEAR(f.z(), kMass * kG, 1e-18);
}

TEST_F(ControlLawTest, TermByTermOracle) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-0.1, 0.1);
  auto rv = [&] { return Vec3(u(rng), u(rng), u(rng)); };
  for (int i = 0; i < 200; ++i) {
    const ReferenceSample ref{rv(), rv(), rv()};
    const SimState s{rv(), rv(), 0.0};
    ErrorState es;
    es.xi = rv();
    const WeightMatrix w = RandomWeights(1, 1e-5, 100 + i);
    const ControlOutput out = ComputeControl(ref, s, es, w, net_, gains_);
    const double phi =
        std::exp(-s.x().squaredNorm() / (2.0 * 0.1 * 0.1));
    for (int k = 0; k < 3; ++k) {
      double f = gains_.kp[k] * (ref.position[k] - s.r[k]) +
                 gains_.ki[k] * es.xi[k] +
                 gains_.kd[k] * (ref.velocity[k] - s.v[k]) +
                 kMass * ref.acceleration[k] - w.matrix()(0, k) * phi;
      if (k == 2) f += kMass * kG;
      ASSERT_NEAR(out.force[k], f, 1e-15);
    }
  }
}

TEST_F(ControlLawTest, WeightShapeMismatch) {
  EXPECT_THROW(ComputeControl(ReferenceSample{}, SimState{}, ErrorState{},
                              WeightMatrix::Zero(2), net_, gains_),
               ShapeError);
}

TEST(ErrorDerivativesTest, PerfectTrackingStallsIntegrator) {
  const ReferenceSample ref{Vec3(1, 2, 3), Vec3(0.1, 0, 0), Vec3::Zero()};
  const SimState s{ref.position, ref.velocity, 0.0};
  ErrorState es;
  es.xi = Vec3(5, 5, 5);
  const ErrorState d = ErrorDerivatives(es, ref, s);
  EXPECT_EQ(d.xi_dot, Vec3::Zero());
  EXPECT_EQ(d.xi_ddot, Vec3::Zero());
  EXPECT_EQ(d.xi, es.xi);
}

Vec3 IntegrateXi(const Vec3& c, const Vec3& slope, double horizon, double dt) {
  Vec3 xi = Vec3::Zero();
  double t = 0.0;
  const auto steps = static_cast<int>(std::lround(horizon / dt));
  for (int k = 0; k < steps; ++k) {
    xi = Rk4Advance(xi, t, dt, [&](const Vec3&, double tau) -> Vec3 {
      // r_d - r = c + slope * tau
      const ReferenceSample ref{c + slope * tau, slope, Vec3::Zero()};
      return ErrorDerivatives(ErrorState{}, ref, SimState{}).xi_dot;
    });
    t += dt;
  }
  return xi;
}

TEST(ErrorDerivativesTest, ConstantAndRampErrorsIntegrateExactly) {
  const Vec3 c(0.01, -0.02, 0.03);
  EXPECT_LE((IntegrateXi(c, Vec3::Zero(), 2.0, 0.01) - 2.0 * c).norm(), 1e-14);
  const Vec3 u(0.1, 0.2, -0.3);
  const Vec3 ramp = IntegrateXi(Vec3::Zero(), u, 3.0, 0.01);
  EXPECT_LE((ramp - 4.5 * u).norm(), 1e-12);
}

TEST(ReferenceModelStepTest, Examples) {
  const Mat9 a = -Mat9::Identity();
  EXPECT_EQ(ReferenceModelStep(Vec9::Zero(), a, 0.1), Vec9::Zero());
  const Vec9 z = ReferenceModelStep(Vec9::Ones(), a, 0.1);
  for (int i = 0; i < 9; ++i) EXPECT_NEAR(z[i], std::exp(-0.1), 1e-8);
  EXPECT_NEAR(z[0], 0.904837, 1e-6);
}

TEST(ReferenceModelStepTest, RandomHurwitzMatchesExpm) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int trial = 0; trial < 20; ++trial) {
    const Mat9 a = testing::RandomHurwitz(rng, 0.3);
    Vec9 z0;
    for (int i = 0; i < 9; ++i) z0[i] = u(rng);
    Vec9 z = z0;
    for (int k = 0; k < 100; ++k) z = ReferenceModelStep(z, a, 0.01);
    const Vec9 expected = testing::Expm(a) * z0;
    ASSERT_LE((z - expected).norm(), 1e-8 * std::max(1.0, expected.norm()));
  }
}

TEST(AdaptStepTest, StallsWithoutErrorOrGain) {
  const WeightMatrix w = RandomWeights(4, 1.0, 8);
  const Eigen::VectorXd phi = Eigen::VectorXd::Constant(4, 0.3);
  const Mat9 p = Mat9::Identity();
  Mat93 b = Mat93::Zero();
  b.bottomRows<3>() = -Mat3::Identity() / kMass;
  const WeightMatrix same = AdaptStep(w, phi, Vec9::Zero(), p, b, 10.0, 0.1);
  EXPECT_EQ(same.matrix(), w.matrix());
  const WeightMatrix frozen = AdaptStep(w, phi, Vec9::Ones(), p, b, 0.0, 0.1);
  EXPECT_EQ(frozen.matrix(), w.matrix());
}

TEST(AdaptStepTest, HandEvaluatedOuterProduct) {
  Mat93 b = Mat93::Zero();
  b.bottomRows<3>() = -Mat3::Identity() / kMass;
  Eigen::VectorXd phi(1);
  phi << 1.0;
  const WeightMatrix w = AdaptStep(WeightMatrix::Zero(1), phi, Vec9::Unit(8),
                                   Mat9::Identity(), b, 1.0, 1.0);
  EXPECT_EQ(w.matrix()(0, 0), 0.0);
  EXPECT_EQ(w.matrix()(0, 1), 0.0);
  EXPECT_NEAR(w.matrix()(0, 2), 1.0 / kMass, 1e-9);
}

TEST(AdaptStepTest, NonFiniteUpdateIsDivergence) {
  Mat93 b = Mat93::Zero();
  b(8, 2) = 1e300;
  Eigen::VectorXd phi = Eigen::VectorXd::Ones(1);
  EXPECT_THROW(AdaptStep(WeightMatrix::Zero(1), phi, Vec9::Unit(8) * 1e300,
                         Mat9::Identity(), b, 1.0, 1.0),
               DivergenceError);
}

TEST(AdaptStepTest, ShapeMismatch) {
  EXPECT_THROW(AdaptStep(WeightMatrix::Zero(2), Eigen::VectorXd::Ones(3),
                         Vec9::Zero(), Mat9::Identity(), Mat93::Zero(), 1.0,
                         1.0),
               ShapeError);
}

// Loop-level tests share the default network and gains.
class LoopTest : public ::testing::Test {
 protected:
  LoopTest() : config_(TrackingConfig()), net_(config_.network.Build()) {}

  LoopDesign Design(ControllerKind kind,
                    StepScheme scheme = StepScheme::kCoupledRk4) const {
    RunConfig c = config_;
    c.scheme = scheme;
    return BuildDesign(c, kind);
  }

  Vec3 Hover() const { return testing::HoverPoint(config_); }

  RunConfig config_;
  RbfNetwork net_;
};

TEST_F(LoopTest, ExactWeightsCancelDisturbance) {
  const WeightMatrix w = RandomWeights(net_.size(), 2e-5, 12);
  const DisturbanceSource truth{RbfTruth{net_, w}};
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-0.3, 0.3);
  for (int i = 0; i < 500; ++i) {
    SimState s;
    s.r = Hover() + Vec3(u(rng), u(rng), u(rng));
    s.v = Vec3(u(rng), u(rng), u(rng));
    const ControlOutput out =
        ComputeControl(ReferenceSample{}, s, ErrorState{}, w, net_,
                       config_.gains);
    ASSERT_LE((DisturbanceEval(truth, s.x(), 0.0) - out.adaptive).norm(),
              1e-12);
  }
}

TEST_F(LoopTest, EquilibriumIsFixedPoint) {
  for (StepScheme scheme :
       {StepScheme::kCoupledRk4, StepScheme::kSampledEuler}) {
    const MracLoop loop(Design(ControllerKind::kAdaptive, scheme),
                        {ZeroDisturbance{}}, config_.reference);
    LoopBundle b = loop.Initial(SimState{Hover(), Vec3::Zero(), 0.0});
    const Eigen::VectorXd y0 = loop.Pack(b);
    const LoopBundle one = loop.Step(b, 1e-3);
    EXPECT_LE((loop.Pack(one) - y0).norm(), 1e-12);
    double worst = 0.0;
    for (int k = 0; k < 10000; ++k) {
      b = loop.Step(b, 1e-3);
      worst = std::max(worst, (b.plant.r - Hover()).norm());
    }
    EXPECT_LE(worst, 1e-10) << ToString(scheme);
    EXPECT_NEAR(b.plant.t, 10.0, 1e-9);
  }
}

TEST_F(LoopTest, PackUnpackRoundTrip) {
  const MracLoop loop(Design(ControllerKind::kAdaptive), {ZeroDisturbance{}},
                      config_.reference);
  LoopBundle b{SimState{Vec3(1, 2, 3), Vec3(4, 5, 6), 0.25}, Vec3(7, 8, 9),
               Vec9::LinSpaced(9, -1, 1), RandomWeights(net_.size(), 1.0, 3)};
  const LoopBundle back = loop.Unpack(loop.Pack(b), 0.25);
  EXPECT_EQ(back.plant.r, b.plant.r);
  EXPECT_EQ(back.plant.v, b.plant.v);
  EXPECT_EQ(back.xi, b.xi);
  EXPECT_EQ(back.z_r, b.z_r);
  EXPECT_EQ(back.w_hat.matrix(), b.w_hat.matrix());
  EXPECT_THROW(loop.Unpack(Eigen::VectorXd::Zero(5), 0.0), ShapeError);
}

TEST_F(LoopTest, InitialStateHasZeroModelError) {
  const MracLoop loop(Design(ControllerKind::kAdaptive), {ZeroDisturbance{}},
                      config_.reference);
  const LoopBundle b =
      loop.Initial(SimState{Hover() + config_.initial_offset, Vec3::Zero(), 0});
  EXPECT_EQ(loop.Evaluate(b).z_tilde, Vec9::Zero());
  EXPECT_EQ(b.w_hat.matrix().norm(), 0.0);
  EXPECT_EQ(b.xi, Vec3::Zero());
}

// Baseline loop under a constant bias is LTI in z = (xi, r_e, r_e'):
// z' = A z + B d, solved exactly with the augmented matrix exponential.
TEST_F(LoopTest, BaselineConstantBiasMatchesLtiSolution) {
  const LoopDesign design = Design(ControllerKind::kBaseline);
  const Vec3 bias(1e-5, 0.0, -2e-5);
  const MracLoop loop(design, {ConstantBias{bias}}, config_.reference);
  const Vec3 r0 = Hover() + config_.initial_offset;
  LoopBundle b = loop.Initial(SimState{r0, Vec3::Zero(), 0.0});

  Eigen::MatrixXd aug = Eigen::MatrixXd::Zero(10, 10);
  aug.topLeftCorner(9, 9) = design.system.a;
  aug.topRightCorner(9, 1) = design.system.b * bias;
  Eigen::VectorXd z0(10);
  z0 << Vec3::Zero(), Vec3(Hover() - r0), Vec3::Zero(), 1.0;
  const double dt = 1e-3;
  const Eigen::MatrixXd step = testing::Expm(aug * dt);

  Eigen::VectorXd z = z0;
  double worst = 0.0, scale = 0.0;
  for (int k = 1; k <= 20000; ++k) {
    b = loop.Step(b, dt);
    z = step * z;
    const Vec9 sim = loop.Evaluate(b).error.z();
    worst = std::max(worst, (sim - z.head<9>()).cwiseAbs().maxCoeff());
    scale = std::max(scale, z.head<9>().cwiseAbs().maxCoeff());
  }
  EXPECT_LE(worst, 1e-8 * scale);
  // Integral action settles where K_i xi cancels the bias.
  const Vec3 xi_ss = -bias.cwiseQuotient(design.gains.ki);
  EXPECT_LE((b.xi - xi_ss).norm(), 1e-6 * xi_ss.norm());
  EXPECT_LE((b.plant.r - Hover()).norm(), 1e-9);
}

// z~ from the loop against a directly propagated z~' = A z~ + B (W_hat - W)^T phi.
TEST_F(LoopTest, ModelErrorFollowsItsOwnDynamics) {
  const LoopDesign design = Design(ControllerKind::kAdaptive);
  const WeightMatrix w = RandomWeights(net_.size(), 2e-5, 21);
  const MracLoop loop(design, {RbfTruth{net_, w}}, config_.reference);
  const LoopBundle start =
      loop.Initial(SimState{Hover() + config_.initial_offset, Vec3::Zero(), 0});
  const Eigen::Index n = loop.Pack(start).size();

  Eigen::VectorXd joint(n + 9);
  joint << loop.Pack(start), loop.Evaluate(start).z_tilde;
  auto deriv = [&](const Eigen::VectorXd& y, double t) -> Eigen::VectorXd {
    const Eigen::VectorXd yl = y.head(n);
    const LoopBundle b = loop.Unpack(yl, t);
    const Eigen::VectorXd phi = EvalPhi(b.plant.x(), net_);
    const Vec3 fa_minus_d = (b.w_hat.matrix() - w.matrix()).transpose() * phi;
    Eigen::VectorXd out(n + 9);
    out << loop.Derivative(yl, t),
        design.system.a * y.tail<9>() + design.system.b * fa_minus_d;
    return out;
  };

  const double dt = 1e-3;
  double t = 0.0, worst = 0.0, peak = 0.0;
  for (int k = 0; k < 5000; ++k) {
    joint = Rk4Advance(joint, t, dt, deriv);
    t += dt;
    const Vec9 zt = loop.Evaluate(loop.Unpack(joint.head(n), t)).z_tilde;
    worst = std::max(worst, (zt - joint.tail<9>()).norm());
    peak = std::max(peak, zt.norm());
  }
  ASSERT_GT(peak, 0.0);
  EXPECT_LE(worst, 1e-6 * peak);
}

TEST_F(LoopTest, LyapunovFunctionNeverIncreases) {
  const LoopDesign design = Design(ControllerKind::kAdaptive);
  const WeightMatrix w = RandomWeights(net_.size(), 2e-5, 5);
  const MracLoop loop(design, {RbfTruth{net_, w}}, config_.reference);
  LoopBundle b =
      loop.Initial(SimState{Hover() + config_.initial_offset, Vec3::Zero(), 0});
  auto value = [&](const LoopBundle& s) {
    return LyapunovValue(loop.Evaluate(s).z_tilde,
                         s.w_hat.matrix() - w.matrix(), design.cert.p,
                         design.gains.gamma);
  };
  double prev = value(b);
  const double v0 = prev;
  double worst = -INFINITY;
  for (int k = 0; k < 5000; ++k) {
    b = loop.Step(b, 1e-3);
    const double now = value(b);
    worst = std::max(worst, now - prev);
    prev = now;
  }
  EXPECT_LE(worst, 1e-9);
  EXPECT_LT(prev, v0);
}

TEST_F(LoopTest, SignalsStayBoundedOverSixtySeconds) {
  const MracLoop loop(Design(ControllerKind::kAdaptive),
                      BuildDisturbance(config_.disturbance, net_),
                      config_.reference);
  LoopBundle b =
      loop.Initial(SimState{Hover() + config_.initial_offset, Vec3::Zero(), 0});
  double w_early = 0.0, z_early = 0.0, w_late = 0.0, z_late = 0.0;
  for (int k = 1; k <= 60000; ++k) {
    b = loop.Step(b, 1e-3);
    if (k % 10) continue;
    const double wn = b.w_hat.FrobeniusNorm();
    const double zn = loop.Evaluate(b).z_tilde.norm();
    if (k <= 5000) {
      w_early = std::max(w_early, wn);
      z_early = std::max(z_early, zn);
    } else {
      w_late = std::max(w_late, wn);
      z_late = std::max(z_late, zn);
    }
  }
  ASSERT_GT(w_early, 0.0);
  ASSERT_GT(z_early, 0.0);
  EXPECT_LE(w_late, 1e3 * w_early);
  EXPECT_LE(z_late, 1e3 * z_early);
}

TEST_F(LoopTest, DivergenceCarriesTime) {
  const MracLoop loop(Design(ControllerKind::kBaseline),
                      {ConstantBias{Vec3(0, 0, 1e9)}}, config_.reference);
  LoopBundle b = loop.Initial(SimState{Hover(), Vec3::Zero(), 0.0});
  try {
    for (int k = 0; k < 100; ++k) b = loop.Step(b, 1e-3);
    FAIL() << "expected divergence";
  } catch (const DivergenceError& e) {
    EXPECT_TRUE(std::isfinite(e.time()));
    EXPECT_GT(e.time(), 0.0);
  }
}

TEST_F(LoopTest, DesignRefusesUnstableGains) {
  RunConfig c = config_;
  c.gains.ki.setZero();
  EXPECT_THROW(BuildDesign(c, ControllerKind::kAdaptive), CertificationError);
}

}  // namespace
}  // namespace flyer
