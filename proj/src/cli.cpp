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

#include "flyer/cli.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <ostream>
#include <string>

namespace flyer {
namespace {

using nlohmann::json;

json MatrixJson(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(row);
  }
  return rows;
}

json Vec3Json(const Vec3& v) { return json::array({v[0], v[1], v[2]}); }

std::string Timestamp() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void WriteJson(const std::filesystem::path& path, const json& doc) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << doc.dump(2) << '\n';
}

std::string TrialFile(ControllerKind kind, std::uint64_t seed) {
  return ToString(kind) + "_trial_" + std::to_string(seed) + ".csv";
}

json TrialJson(const TrialResult& r) {
  json j = {{"seed", r.seed},
            {"failed", r.failed},
            {"samples", r.samples},
            {"rms", Vec3Json(r.rms)},
            {"peak_error", Vec3Json(r.peak_error)},
            {"final_V", r.final_v},
            {"Wdot_peak", r.wdot_peak},
            {"Wdot_terminal", r.wdot_terminal},
            {"z_tilde_peak", r.z_tilde_peak},
            {"z_tilde_final", r.z_tilde_final},
            {"trajectory", r.trajectory}};
  if (r.failed) {
    j["failure_time"] = r.failure_time;
    j["failure_message"] = r.failure_message;
  }
  return j;
}

json SummaryJson(const BatchSummary& s) {
  return {{"trials", s.trials},
          {"failed", s.failed},
          {"mean_rms", Vec3Json(s.mean)},
          {"esd_rms", s.esd ? Vec3Json(*s.esd) : json(nullptr)}};
}

// Certifies the configured gains; on success returns the adaptive design.
// Writes nothing; the caller reports.
struct Certified {
  SystemMatrices system;
  HurwitzReport hurwitz;
  std::optional<LyapunovCert> cert;
  std::string error;
};

Certified Certify(const RunConfig& config) {
  Certified c;
  c.system = AssembleAB(config.gains);
  c.hurwitz = IsHurwitz(c.system.a);
  try {
    c.cert = SolveLyapunov(c.system.a, config.Q());
    const double tol = kResidualTolerance * c.cert->q.norm();
    if (!(c.cert->residual <= tol)) {
      c.error = "Lyapunov residual " + std::to_string(c.cert->residual) +
                " exceeds tolerance";
    }
  } catch (const CertificationError& e) {
    c.error = e.what();
  }
  return c;
}

std::vector<TrialResult> RunArm(const RunConfig& config, ControllerKind kind,
                                const LoopDesign& design,
                                const CommandOptions& opts) {
  const std::vector<TrialSpec> specs = BuildTrialSpecs(config, kind);
  const std::filesystem::path dir = opts.out_dir;
  SinkFactory sinks = [dir](const TrialSpec& spec, std::size_t) {
    return std::make_unique<CsvTelemetryWriter>(
        dir / TrialFile(spec.controller, spec.seed));
  };
  std::vector<TrialResult> results =
      opts.workers > 1 ? RunBatch(specs, design, opts.workers, sinks)
                       : RunBatchSerial(specs, design, sinks);
  for (auto& r : results) r.trajectory = TrialFile(kind, r.seed);
  return results;
}

void ReportFailures(const std::vector<TrialResult>& results,
                    std::ostream& log) {
  for (const auto& r : results) {
    if (r.failed) {
      log << ToString(r.controller) << " trial seed " << r.seed
          << " failed: " << r.failure_message << '\n';
    }
  }
}

bool AnyFailed(const std::vector<TrialResult>& results) {
  for (const auto& r : results) {
    if (r.failed) return true;
  }
  return false;
}

std::string Cell(const BatchSummary& s, int axis) {
  char buf[64];
  if (s.esd) {
    std::snprintf(buf, sizeof(buf), "%.4f +/- %.4f", 100.0 * s.mean[axis],
                  100.0 * (*s.esd)[axis]);
  } else {
    std::snprintf(buf, sizeof(buf), "%.4f", 100.0 * s.mean[axis]);
  }
  return buf;
}

}  // namespace

json CertificateJson(const SystemMatrices& system, const HurwitzReport& hurwitz,
                     const std::optional<LyapunovCert>& cert) {
  json eig = json::array();
  for (const auto& l : hurwitz.eigenvalues) {
    eig.push_back({{"re", l.real()}, {"im", l.imag()}});
  }
  json j = {{"A", MatrixJson(system.a)},
            {"B", MatrixJson(system.b)},
            {"eigenvalues", eig},
            {"spectral_abscissa", hurwitz.abscissa},
            {"hurwitz", hurwitz.hurwitz}};
  if (cert) {
    j["Q"] = MatrixJson(cert->q);
    j["P"] = MatrixJson(cert->p);
    j["residual"] = cert->residual;
    j["lambda_min_Q"] = cert->lambda_min_q;
    j["lambda_min_P"] = cert->lambda_min_p;
    j["condition"] = cert->condition;
    j["warning"] = cert->warning ? json(*cert->warning) : json(nullptr);
  }
  return j;
}

json StripTimestamps(json summary) {
  summary.erase("generated_at");
  return summary;
}

int CmdCertify(const RunConfig& config, const CommandOptions& opts,
               std::ostream& log) {
  const Certified c = Certify(config);
  json doc = CertificateJson(c.system, c.hurwitz, c.cert);
  doc["generated_at"] = Timestamp();
  doc["passed"] = c.error.empty();
  if (!c.error.empty()) doc["error"] = c.error;
  std::filesystem::create_directories(opts.out_dir);
  WriteJson(opts.out_dir / "certificate.json", doc);

  log << "spectral abscissa: " << c.hurwitz.abscissa << '\n';
  if (!c.error.empty()) {
    log << "certification failed: " << c.error << '\n';
    for (const auto& l : c.hurwitz.eigenvalues) {
      log << "  eigenvalue " << l.real() << (l.imag() < 0 ? " - " : " + ")
          << std::abs(l.imag()) << "i\n";
    }
    return kExitCertification;
  }
  log << "Lyapunov residual: " << c.cert->residual << '\n';
  if (c.cert->warning) log << "warning: " << *c.cert->warning << '\n';
  log << "certified\n";
  return kExitOk;
}

int CmdSimulate(const RunConfig& config, ControllerKind kind,
                const CommandOptions& opts, std::ostream& log) {
  const Certified c = Certify(config);
  if (!c.error.empty()) {
    log << "certification failed: " << c.error << '\n';
    return kExitCertification;
  }
  const LoopDesign design = BuildDesign(config, kind);
  std::filesystem::create_directories(opts.out_dir);
  const std::vector<TrialResult> results = RunArm(config, kind, design, opts);
  ReportFailures(results, log);

  json trials = json::array();
  for (const auto& r : results) trials.push_back(TrialJson(r));
  json doc = {{"generated_at", Timestamp()},
              {"config", SerializeConfig(config)},
              {"certificate", CertificateJson(c.system, c.hurwitz, c.cert)},
              {"controller", ToString(kind)},
              {"trials", trials}};
  bool any_ok = false;
  for (const auto& r : results) any_ok = any_ok || !r.failed;
  if (any_ok) {
    const BatchSummary s = Aggregate(results);
    doc["summary"] = SummaryJson(s);
    log << ToString(kind) << " RMS (cm): ";
    for (int i = 0; i < 3; ++i) log << (i ? ", " : "") << "n" << i + 1 << " " << Cell(s, i);
    log << '\n';
  }
  WriteJson(opts.out_dir / (ToString(kind) + "_summary.json"), doc);
  return AnyFailed(results) ? kExitDivergence : kExitOk;
}

int CmdCompare(const RunConfig& config, const CommandOptions& opts,
               std::ostream& log) {
  const Certified c = Certify(config);
  if (!c.error.empty()) {
    log << "certification failed: " << c.error << '\n';
    return kExitCertification;
  }
  std::filesystem::create_directories(opts.out_dir);
  const auto adaptive = RunArm(config, ControllerKind::kAdaptive,
                               BuildDesign(config, ControllerKind::kAdaptive), opts);
  const auto baseline = RunArm(config, ControllerKind::kBaseline,
                               BuildDesign(config, ControllerKind::kBaseline), opts);
  ReportFailures(adaptive, log);
  ReportFailures(baseline, log);

  json doc = {{"generated_at", Timestamp()},
              {"config", SerializeConfig(config)},
              {"certificate", CertificateJson(c.system, c.hurwitz, c.cert)}};
  json arms = json::object();
  std::optional<BatchSummary> sa, sb;
  for (const auto* arm : {&adaptive, &baseline}) {
    json trials = json::array();
    for (const auto& r : *arm) trials.push_back(TrialJson(r));
    json a = {{"trials", trials}};
    try {
      const BatchSummary s = Aggregate(*arm);
      a["summary"] = SummaryJson(s);
      (arm == &adaptive ? sa : sb) = s;
    } catch (const Error&) {
      a["summary"] = nullptr;
    }
    arms[ToString(arm->front().controller)] = a;
  }
  doc["arms"] = arms;

  int code = AnyFailed(adaptive) || AnyFailed(baseline) ? kExitDivergence : kExitOk;
  if (sa && sb) {
    const ReductionReport red = PairedComparison(*sa, *sb);
    json pct = json::array();
    for (const auto& p : red.percent) pct.push_back(p ? json(*p) : json(nullptr));
    doc["reduction_percent"] = pct;

    log << "RMS position error, mean +/- ESD over " << config.trials
        << " trials (cm)\n";
    char line[160];
    std::snprintf(line, sizeof(line), "%-5s %-24s %-24s %s\n", "axis",
                  "adaptive", "baseline", "reduction");
    log << line;
    for (int i = 0; i < 3; ++i) {
      char red_buf[32];
      if (red.percent[i]) {
        std::snprintf(red_buf, sizeof(red_buf), "%.1f %%", *red.percent[i]);
      } else {
        std::snprintf(red_buf, sizeof(red_buf), "n/a");
      }
      std::snprintf(line, sizeof(line), "n%-4d %-24s %-24s %s\n", i + 1,
                    Cell(*sa, i).c_str(), Cell(*sb, i).c_str(), red_buf);
      log << line;
    }
  } else {
    doc["reduction_percent"] = nullptr;
    log << "an arm failed entirely; no comparison\n";
    code = kExitDivergence;
  }
  WriteJson(opts.out_dir / "comparison.json", doc);
  return code;
}

}  // namespace flyer
