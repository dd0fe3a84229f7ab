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

// Desired trajectories r_d(t) with analytic first and second derivatives.

#pragma once

#include <variant>
#include <vector>

#include "flyer/common.hpp"

namespace flyer {

struct ReferenceSample {
  Vec3 position = Vec3::Zero();
  Vec3 velocity = Vec3::Zero();
  Vec3 acceleration = Vec3::Zero();
};

struct ConstantReference {
  Vec3 point = Vec3::Zero();
};

// Quintic blend from `from` to `to` over [start, start + duration]; zero
// velocity and acceleration at both ends.
struct SmoothStepReference {
  Vec3 from = Vec3::Zero();
  Vec3 to = Vec3::Zero();
  double start = 0.0;
  double duration = 1.0;
};

// Consecutive quintic blends between waypoints, one per segment_duration,
// holding the last waypoint afterwards.
struct WaypointReference {
  std::vector<Vec3> points;
  double segment_duration = 1.0;
};

using ReferenceSignal =
    std::variant<ConstantReference, SmoothStepReference, WaypointReference>;

// Throws ConfigError for non-finite points or non-positive durations.
void ValidateReference(const ReferenceSignal& ref);

ReferenceSample EvalReference(const ReferenceSignal& ref, double t);

}  // namespace flyer
