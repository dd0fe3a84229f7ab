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

#include "flyer/gains.hpp"

#include <cmath>

namespace flyer {

void GainSet::Validate() const {
  for (const Vec3* g : {&kp, &ki, &kd}) {
    if (!g->allFinite() || (g->array() < 0.0).any()) {
      throw ConfigError("gain entries must be finite and non-negative");
    }
  }
  if (!(mass > 0.0) || !std::isfinite(mass)) {
    throw ConfigError("controller mass must be finite and > 0");
  }
  if (!(gravity >= 0.0) || !std::isfinite(gravity)) {
    throw ConfigError("controller gravity must be finite and >= 0");
  }
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw ConfigError("adaptation gain gamma must be finite and > 0");
  }
}

bool GainSet::PositiveDefinite() const {
  return (kp.array() > 0.0).all() && (ki.array() > 0.0).all() &&
         (kd.array() > 0.0).all();
}

GainSet GainSet::PolePlacement(double mass, double gravity,
                               const std::array<double, 3>& poles,
                               double gamma) {
  const double a = poles[0], b = poles[1], c = poles[2];
  GainSet g;
  g.mass = mass;
  g.gravity = gravity;
  g.gamma = gamma;
  g.kd = Vec3::Constant(mass * (a + b + c));
  g.kp = Vec3::Constant(mass * (a * b + b * c + a * c));
  g.ki = Vec3::Constant(mass * (a * b * c));
  return g;
}

}  // namespace flyer
