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

// certify / simulate / compare commands behind the flyer command-line tool.

#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>

#include "json.hpp"

#include "flyer/config.hpp"

namespace flyer {

// Process exit codes.
enum ExitCode : int {
  kExitOk = 0,
  kExitValidation = 1,
  kExitCertification = 2,
  kExitDivergence = 3,
};

// Residual tolerance relative to |Q|_F for a certificate to pass.
inline constexpr double kResidualTolerance = 1e-10;

struct CommandOptions {
  std::filesystem::path out_dir;
  int workers = 1;
};

// Writes certificate.json (A, B, eigenvalues, P, Q, residual). Returns
// kExitOk iff A is Hurwitz and the residual is within tolerance.
int CmdCertify(const RunConfig& config, const CommandOptions& opts,
               std::ostream& log);

// Runs one arm; writes <arm>_trial_<seed>.csv per trial and
// <arm>_summary.json.
int CmdSimulate(const RunConfig& config, ControllerKind kind,
                const CommandOptions& opts, std::ostream& log);

// Runs both arms with shared seeds; writes per-trial CSVs and
// comparison.json, prints the mean +/- ESD table.
int CmdCompare(const RunConfig& config, const CommandOptions& opts,
               std::ostream& log);

// JSON form of a certificate, shared by all summaries.
nlohmann::json CertificateJson(const SystemMatrices& system,
                               const HurwitzReport& hurwitz,
                               const std::optional<LyapunovCert>& cert);

// Drops the volatile "generated_at" field so two summaries can be compared.
nlohmann::json StripTimestamps(nlohmann::json summary);

}  // namespace flyer
