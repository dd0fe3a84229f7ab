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

// Shared scenario builders for the tests and the acceptance suite.

#pragma once

#include <cstdint>
#include <random>

#include "flyer/config.hpp"
#include "flyer/controller.hpp"
#include "flyer/harness.hpp"
#include "flyer/lyapunov.hpp"
#include "flyer/plant.hpp"

namespace flyer::testing {

// Block weights on (xi, xi', xi'') that keep the error-to-regressor path
// well damped for the default poles.
inline Eigen::Vector3d TrackingQWeights() { return {1e4, 1e2, 1.0}; }

inline RunConfig TrackingConfig() {
  RunConfig c = DefaultConfig();
  c.q_weights = TrackingQWeights();
  return c;
}

// Entries uniform in [-scale, scale] from a seeded generator.
inline WeightMatrix RandomWeights(std::size_t n, double scale,
                                  std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  WeightMatrix::Storage w(static_cast<Eigen::Index>(n), 3);
  for (Eigen::Index i = 0; i < w.size(); ++i) w(i) = scale * u(rng);
  return WeightMatrix(w);
}

inline Vec3 HoverPoint(const RunConfig& c) {
  return EvalReference(c.reference, 0.0).position;
}

inline TrialSpec MakeTrial(const RunConfig& c, ControllerKind kind,
                           DisturbanceSource dist, double duration,
                           std::uint64_t seed = 1) {
  TrialSpec t;
  t.controller = kind;
  t.duration = duration;
  t.dt = c.dt;
  t.seed = seed;
  t.disturbance = std::move(dist);
  t.reference = c.reference;
  t.initial = SimState{HoverPoint(c) + c.initial_offset, Vec3::Zero(), 0.0};
  t.noise_std = 0.0;
  return t;
}

}  // namespace flyer::testing
