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

// Hovering-trial protocol: run paired batches of adaptive and baseline
// trials, reduce each trial to per-axis RMS errors, aggregate mean +/- ESD
// and report per-axis percent reductions.

#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "flyer/common.hpp"
#include "flyer/controller.hpp"
#include "flyer/plant.hpp"
#include "flyer/reference.hpp"
#include "flyer/telemetry.hpp"

namespace flyer {

struct TrialSpec {
  ControllerKind controller = ControllerKind::kAdaptive;
  double duration = 20.0;  // s
  double dt = 1e-3;        // s
  std::uint64_t seed = 1;
  DisturbanceSource disturbance;
  ReferenceSignal reference;
  SimState initial;
  double noise_std = 0.0;  // m, Gaussian position measurement noise

  // Throws ConfigError unless duration > 0, dt > 0 and duration / dt is an
  // integer (to 1e-9 relative).
  std::size_t Steps() const;
};

struct TrialResult {
  std::uint64_t seed = 0;
  ControllerKind controller = ControllerKind::kAdaptive;
  bool failed = false;
  double failure_time = 0.0;
  std::string failure_message;

  std::size_t samples = 0;
  Vec3 rms = Vec3::Zero();         // m
  Vec3 peak_error = Vec3::Zero();  // m, max |r_e| per axis
  double final_v = 0.0;
  double wdot_peak = 0.0;      // max |W_hat'|_F
  double wdot_terminal = 0.0;  // mean |W_hat'|_F over the last 10% of samples
  double z_tilde_peak = 0.0;
  double z_tilde_final = 0.0;
  std::string trajectory;  // telemetry file name, if one was written
};

// Runs one trial from spec.initial with the given design (its controller
// kind is overridden by spec.controller). Samples are taken at t = k dt,
// k = 0..N. Divergence is reported through TrialResult::failed rather than
// thrown.
TrialResult RunTrial(const TrialSpec& spec, const LoopDesign& design,
                     TelemetrySink* sink = nullptr);

// Per-axis sqrt(mean(e^2)). Throws DomainError on an empty input.
Vec3 ComputeRms(std::span<const Vec3> errors);

struct BatchSummary {
  std::size_t trials = 0;  // unfailed trials aggregated
  std::size_t failed = 0;
  Vec3 mean = Vec3::Zero();
  std::optional<Vec3> esd;  // (N-1)-denominator; needs >= 2 trials
};

// Throws Error when every trial failed.
BatchSummary Aggregate(std::span<const TrialResult> results);

struct ReductionReport {
  // 100 (baseline - adaptive) / baseline per axis; nullopt where the
  // baseline mean is zero.
  std::array<std::optional<double>, 3> percent;
};

ReductionReport PairedComparison(const BatchSummary& adaptive,
                                 const BatchSummary& baseline);

using SinkFactory = std::function<std::unique_ptr<TelemetrySink>(
    const TrialSpec& spec, std::size_t index)>;

// Reference implementation: trials in order on the calling thread.
std::vector<TrialResult> RunBatchSerial(std::span<const TrialSpec> specs,
                                        const LoopDesign& design,
                                        const SinkFactory& sinks = {});

// Trials distributed over `workers` OpenMP threads. Results are in spec
// order and identical to RunBatchSerial.
std::vector<TrialResult> RunBatch(std::span<const TrialSpec> specs,
                                  const LoopDesign& design, int workers,
                                  const SinkFactory& sinks = {});

}  // namespace flyer
