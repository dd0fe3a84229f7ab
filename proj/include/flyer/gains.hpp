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

#include <array>

#include "flyer/common.hpp"

namespace flyer {

// Diagonal PID gains of the position loop plus the quantities the control
// law and adaptation law share. kp in N/m, ki in N/(m s), kd in N s/m.
struct GainSet {
  Vec3 kp = Vec3::Zero();
  Vec3 ki = Vec3::Zero();
  Vec3 kd = Vec3::Zero();
  double mass = 9.5e-5;   // kg
  double gravity = 9.81;  // m/s^2
  double gamma = 1e-4;    // adaptation gain

  // Rejects non-finite or negative gains, m <= 0 and gamma <= 0. Zero gains
  // pass; whether they stabilize is the certifier's call.
  void Validate() const;

  // Strict form of the positive-definiteness requirement on K_p, K_i, K_d.
  bool PositiveDefinite() const;

  // Per-axis gains placing the closed-loop poles at -p0, -p1, -p2 (rad/s):
  // kd/m, kp/m, ki/m are the coefficients of (s+p0)(s+p1)(s+p2).
  static GainSet PolePlacement(double mass, double gravity,
                               const std::array<double, 3>& poles,
                               double gamma);
};

}  // namespace flyer
