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

namespace flyer {

// One classical fourth-order Runge-Kutta step of y' = f(y, t).
// State must form a vector space under +, and scalar *.
template <typename State, typename Deriv>
State Rk4Advance(const State& y, double t, double dt, const Deriv& f) {
  const double half = 0.5 * dt;
  const State k1 = f(y, t);
  const State k2 = f(State(y + half * k1), t + half);
  const State k3 = f(State(y + half * k2), t + half);
  const State k4 = f(State(y + dt * k3), t + dt);
  return State(y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
}

}  // namespace flyer
