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

#include "flyer/harness.hpp"

#include <cmath>
#include <exception>
#include <random>


namespace flyer {

std::size_t TrialSpec::Steps() const {
  if (!(duration > 0.0) || !std::isfinite(duration)) {
    throw ConfigError("trial duration must be finite and > 0");
  }
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw ConfigError("trial dt must be finite and > 0");
  }
  const double ratio = duration / dt;
  const double steps = std::round(ratio);
  if (std::abs(ratio - steps) > 1e-9 * ratio || steps < 1.0) {
    throw ConfigError("trial duration must be an integer multiple of dt");
  }
  return static_cast<std::size_t>(steps);
}

TrialResult RunTrial(const TrialSpec& spec, const LoopDesign& design,
                     TelemetrySink* sink) {
  const std::size_t steps = spec.Steps();
  if (!(spec.noise_std >= 0.0)) throw ConfigError("noise_std must be >= 0");

  LoopDesign trial_design = design;
  trial_design.kind = spec.controller;
  const MracLoop loop(std::move(trial_design), spec.disturbance,
                      spec.reference);
  const auto& d = loop.design();
  const std::optional<WeightMatrix> truth =
      KnownWeights(spec.disturbance, d.network);

  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  auto draw_noise = [&]() -> Vec3 {
    if (spec.noise_std == 0.0) return Vec3::Zero();
    Vec3 n;
    for (int i = 0; i < 3; ++i) n[i] = spec.noise_std * normal(rng);
    return n;
  };

  TrialResult result;
  result.seed = spec.seed;
  result.controller = spec.controller;
  std::vector<Vec3> errors;
  errors.reserve(steps + 1);
  const std::size_t terminal_start =
      static_cast<std::size_t>(std::ceil(0.9 * static_cast<double>(steps)));
  double terminal_sum = 0.0;
  std::size_t terminal_count = 0;

  Vec3 noise = draw_noise();
  LoopBundle bundle = loop.Initial(spec.initial, noise);
  for (std::size_t k = 0;; ++k) {
    const LoopSignals sig = loop.Evaluate(bundle, noise);
    const Vec3 r_e = sig.ref.position - bundle.plant.r;
    errors.push_back(r_e);
    result.peak_error = result.peak_error.cwiseMax(r_e.cwiseAbs());

    double v = sig.z_tilde.dot(d.cert.p * sig.z_tilde);
    if (truth) {
      v = LyapunovValue(sig.z_tilde, bundle.w_hat.matrix() - truth->matrix(),
                        d.cert.p, d.gains.gamma);
    }
    const double wdot = sig.w_hat_dot.norm();
    const double zt = sig.z_tilde.norm();
    result.final_v = v;
    result.wdot_peak = std::max(result.wdot_peak, wdot);
    result.z_tilde_peak = std::max(result.z_tilde_peak, zt);
    result.z_tilde_final = zt;
    if (k >= terminal_start) {
      terminal_sum += wdot;
      ++terminal_count;
    }
    if (sink) {
      sink->Write({bundle.plant.t, bundle.plant.r, sig.ref.position, r_e,
                   sig.control.force, sig.control.adaptive, v,
                   LyapunovRate(sig.z_tilde, d.cert.q),
                   bundle.w_hat.FrobeniusNorm()});
    }
    if (k == steps) break;

    try {
      bundle = loop.Step(bundle, spec.dt, noise);
    } catch (const DivergenceError& e) {
      result.failed = true;
      result.failure_time = e.time();
      result.failure_message = e.what();
      break;
    }
    // Sample times are k * dt exactly, not an accumulated sum.
    bundle.plant.t = static_cast<double>(k + 1) * spec.dt;
    noise = draw_noise();
  }

  result.samples = errors.size();
  result.rms = ComputeRms(errors);
  result.wdot_terminal =
      terminal_count > 0 ? terminal_sum / static_cast<double>(terminal_count)
                         : 0.0;
  return result;
}

Vec3 ComputeRms(std::span<const Vec3> errors) {
  if (errors.empty()) throw DomainError("ComputeRms: no samples");
  Vec3 sum = Vec3::Zero();
  for (const Vec3& e : errors) sum += e.cwiseAbs2();
  return (sum / static_cast<double>(errors.size())).cwiseSqrt();
}

BatchSummary Aggregate(std::span<const TrialResult> results) {
  BatchSummary s;
  Vec3 sum = Vec3::Zero();
  for (const auto& r : results) {
    if (r.failed) {
      ++s.failed;
      continue;
    }
    ++s.trials;
    sum += r.rms;
  }
  if (s.trials == 0) throw Error("every trial in the batch failed");
  s.mean = sum / static_cast<double>(s.trials);
  if (s.trials >= 2) {
    Vec3 sq = Vec3::Zero();
    for (const auto& r : results) {
      if (!r.failed) sq += (r.rms - s.mean).cwiseAbs2();
    }
    s.esd = (sq / static_cast<double>(s.trials - 1)).cwiseSqrt();
  }
  return s;
}

ReductionReport PairedComparison(const BatchSummary& adaptive,
                                 const BatchSummary& baseline) {
  ReductionReport report;
  for (int i = 0; i < 3; ++i) {
    if (baseline.mean[i] != 0.0) {
      report.percent[i] =
          100.0 * (baseline.mean[i] - adaptive.mean[i]) / baseline.mean[i];
    }
  }
  return report;
}

std::vector<TrialResult> RunBatchSerial(std::span<const TrialSpec> specs,
                                        const LoopDesign& design,
                                        const SinkFactory& sinks) {
  std::vector<TrialResult> results;
  results.reserve(specs.size());
  for (std::size_t i = 0; i < specs.size(); ++i) {
    auto sink = sinks ? sinks(specs[i], i) : nullptr;
    results.push_back(RunTrial(specs[i], design, sink.get()));
  }
  return results;
}

std::vector<TrialResult> RunBatch(std::span<const TrialSpec> specs,
                                  const LoopDesign& design, int workers,
                                  const SinkFactory& sinks) {
  if (workers < 1) throw ConfigError("worker count must be >= 1");
  std::vector<TrialResult> results(specs.size());
  std::vector<std::exception_ptr> errors(specs.size());
  const auto count = static_cast<std::int64_t>(specs.size());

#pragma omp parallel for num_threads(workers) schedule(dynamic, 1)
  for (std::int64_t i = 0; i < count; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    try {
      auto sink = sinks ? sinks(specs[idx], idx) : nullptr;
      results[idx] = RunTrial(specs[idx], design, sink.get());
    } catch (...) {
      errors[idx] = std::current_exception();
    }
  }

  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

}  // namespace flyer
