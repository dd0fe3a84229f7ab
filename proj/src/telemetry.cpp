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

#include "flyer/telemetry.hpp"

#include <charconv>

namespace flyer {
namespace {

void Append(std::string& line, double value) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  line.append(buf, res.ptr);
}

void Append(std::string& line, const Vec3& v) {
  for (int i = 0; i < 3; ++i) {
    line.push_back(',');
    Append(line, v[i]);
  }
}

}  // namespace

CsvTelemetryWriter::CsvTelemetryWriter(const std::filesystem::path& path)
    : out_(path) {
  if (!out_) throw Error("cannot open telemetry file " + path.string());
  out_ << kTelemetryHeader << '\n';
}

void CsvTelemetryWriter::Write(const TelemetryRow& row) {
  line_.clear();
  Append(line_, row.t);
  Append(line_, row.r);
  Append(line_, row.r_d);
  Append(line_, row.r_e);
  Append(line_, row.f);
  Append(line_, row.f_a);
  for (double x : {row.v, row.v_dot, row.w_fro}) {
    line_.push_back(',');
    Append(line_, x);
  }
  line_.push_back('\n');
  out_ << line_;
}

}  // namespace flyer
