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

// Per-step telemetry rows and their CSV encoding.

#pragma once

#include <filesystem>
#include <fstream>
#include <string>

#include "flyer/common.hpp"

namespace flyer {

struct TelemetryRow {
  double t = 0.0;
  Vec3 r = Vec3::Zero();
  Vec3 r_d = Vec3::Zero();
  Vec3 r_e = Vec3::Zero();
  Vec3 f = Vec3::Zero();
  Vec3 f_a = Vec3::Zero();
  double v = 0.0;      // Lyapunov function (z~ part only when W is unknown)
  double v_dot = 0.0;  // -z~^T Q z~
  double w_fro = 0.0;  // |W_hat|_F
};

class TelemetrySink {
 public:
  virtual ~TelemetrySink() = default;
  virtual void Write(const TelemetryRow& row) = 0;
};

// Fixed column set, in this order.
inline constexpr const char* kTelemetryHeader =
    "t,r1,r2,r3,rd1,rd2,rd3,re1,re2,re3,f1,f2,f3,fa1,fa2,fa3,V,Vdot,Wfro";

// Writes shortest round-trip decimal representations, so values parsed back
// from the file equal the in-memory doubles exactly.
class CsvTelemetryWriter : public TelemetrySink {
 public:
  explicit CsvTelemetryWriter(const std::filesystem::path& path);
  void Write(const TelemetryRow& row) override;

 private:
  std::ofstream out_;
  std::string line_;
};

}  // namespace flyer
