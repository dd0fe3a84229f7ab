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

#include "flyer/reference.hpp"

#include <gtest/gtest.h>

namespace flyer {
namespace {

TEST(ReferenceTest, ConstantHasNoMotion) {
  const ReferenceSample s = EvalReference(ConstantReference{Vec3(0, 0, 0.1)}, 7);
  EXPECT_EQ(s.position, Vec3(0, 0, 0.1));
  EXPECT_EQ(s.velocity, Vec3::Zero());
  EXPECT_EQ(s.acceleration, Vec3::Zero());
}

TEST(ReferenceTest, SmoothStepEndpointsAndMidpoint) {
  const SmoothStepReference ref{Vec3::Zero(), Vec3(0, 0, 1), 1.0, 2.0};
  EXPECT_EQ(EvalReference(ref, 0.5).position, Vec3::Zero());
  EXPECT_EQ(EvalReference(ref, 3.5).position, Vec3(0, 0, 1));
  EXPECT_EQ(EvalReference(ref, 3.5).velocity, Vec3::Zero());
  const ReferenceSample mid = EvalReference(ref, 2.0);
  EXPECT_NEAR(mid.position.z(), 0.5, 1e-15);
  EXPECT_NEAR(mid.velocity.z(), 30.0 / 16.0 / 2.0, 1e-14);  // 15/8 per 2 s
  EXPECT_NEAR(mid.acceleration.z(), 0.0, 1e-14);
}

TEST(ReferenceTest, SmoothStepDerivativesMatchFiniteDifference) {
  const SmoothStepReference ref{Vec3(1, 0, 0), Vec3(0, 2, -1), 0.0, 1.5};
  const double h = 1e-6;
  for (double t = 0.1; t < 1.5; t += 0.1) {
    const ReferenceSample s = EvalReference(ref, t);
    const ReferenceSample a = EvalReference(ref, t - h);
    const ReferenceSample b = EvalReference(ref, t + h);
    EXPECT_LE((s.velocity - (b.position - a.position) / (2 * h)).norm(), 1e-7);
    EXPECT_LE((s.acceleration - (b.velocity - a.velocity) / (2 * h)).norm(),
              1e-6);
  }
}

TEST(ReferenceTest, WaypointsVisitEachPointAtSegmentBoundaries) {
  const WaypointReference ref{{Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(1, 1, 0)},
                              2.0};
  EXPECT_EQ(EvalReference(ref, -1.0).position, Vec3(0, 0, 0));
  EXPECT_NEAR((EvalReference(ref, 2.0).position - Vec3(1, 0, 0)).norm(), 0,
              1e-15);
  EXPECT_EQ(EvalReference(ref, 4.0).position, Vec3(1, 1, 0));
  EXPECT_EQ(EvalReference(ref, 9.0).velocity, Vec3::Zero());
  EXPECT_NEAR(EvalReference(ref, 3.0).position.y(), 0.5, 1e-15);
}

TEST(ReferenceTest, ValidationRejectsDegenerateSignals) {
  EXPECT_THROW(ValidateReference(SmoothStepReference{Vec3::Zero(),
                                                     Vec3::Ones(), 0, 0}),
               ConfigError);
  EXPECT_THROW(ValidateReference(WaypointReference{{}, 1.0}), ConfigError);
  EXPECT_THROW(ValidateReference(ConstantReference{Vec3(NAN, 0, 0)}),
               ConfigError);
  EXPECT_NO_THROW(ValidateReference(ConstantReference{}));
}

}  // namespace
}  // namespace flyer
