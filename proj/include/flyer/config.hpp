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

// Run configuration: a single JSON document describing the plant, gains,
// adaptation, network, disturbance, reference and trial protocol.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "flyer/controller.hpp"
#include "flyer/gains.hpp"
#include "flyer/harness.hpp"
#include "flyer/plant.hpp"
#include "flyer/rbf.hpp"
#include "flyer/reference.hpp"

namespace flyer {

// Either grid-builder parameters or an explicit center/bandwidth list.
struct NetworkSpec {
  std::optional<GridSpec> grid;
  std::vector<StateVec> centers;
  std::vector<double> bandwidths;

  RbfNetwork Build() const;
};

struct DisturbanceSpec;

struct CompositeSpec {
  std::vector<DisturbanceSpec> terms;
};

// network == nullopt means "the controller's own network".
struct RbfTruthSpec {
  std::optional<NetworkSpec> network;
  Eigen::MatrixXd weights;
};

struct DisturbanceSpec {
  std::variant<ZeroDisturbance, ConstantBias, Sinusoid, TetherSpring,
               RbfTruthSpec, CompositeSpec>
      kind;
};

DisturbanceSource BuildDisturbance(const DisturbanceSpec& spec,
                                   const RbfNetwork& controller_network);

struct RunConfig {
  PlantParams plant;
  // kp/ki/kd plus gamma; mass and gravity always mirror `plant`.
  GainSet gains;
  Eigen::Vector3d q_weights = Eigen::Vector3d::Ones();
  StepScheme scheme = StepScheme::kCoupledRk4;
  NetworkSpec network;
  DisturbanceSpec disturbance;
  ReferenceSignal reference;
  std::size_t trials = 5;
  double duration = 20.0;
  double dt = 1e-3;
  std::uint64_t seed_base = 1;
  Vec3 initial_offset = Vec3(0.01, 0.01, -0.01);
  double noise_std = 0.0;
  std::string output_dir = "out";

  Mat9 Q() const { return BlockWeightedQ(q_weights); }
};

// The documented defaults: 95 mg plant, poles at {-6, -8, -10} rad/s,
// gamma = 1e-4, Q = I, 3x3x3 position grid over r_d +/- 0.2 m, composite
// bias + sinusoid + tether disturbance, r_d = [0 0 0.1] m, five 20 s trials.
RunConfig DefaultConfig();

// Throws ConfigError on any missing/ill-typed/invalid field. Keys absent from
// the document take their DefaultConfig() values.
RunConfig ParseConfig(const nlohmann::json& doc);
nlohmann::json SerializeConfig(const RunConfig& config);
RunConfig LoadConfig(const std::filesystem::path& path);

// Design for the given controller arm; runs the certifier.
LoopDesign BuildDesign(const RunConfig& config, ControllerKind kind);

// One spec per trial, seeds seed_base .. seed_base + trials - 1, starting at
// r_d(0) + initial_offset with the reference velocity.
std::vector<TrialSpec> BuildTrialSpecs(const RunConfig& config,
                                       ControllerKind kind);

std::string ToString(ControllerKind kind);
std::string ToString(StepScheme scheme);

}  // namespace flyer
