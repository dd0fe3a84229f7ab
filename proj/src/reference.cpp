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

#include "flyer/reference.hpp"

#include <cmath>
#include <type_traits>

namespace flyer {
namespace {

// s(u) = 10u^3 - 15u^4 + 6u^5 on [0, 1], with derivatives w.r.t. u.
struct Quintic {
  double s, ds, dds;
};

Quintic QuinticBlend(double u) {
  if (u <= 0.0) return {0.0, 0.0, 0.0};
  if (u >= 1.0) return {1.0, 0.0, 0.0};
  const double u2 = u * u;
  const double u3 = u2 * u;
  return {u3 * (10.0 - 15.0 * u + 6.0 * u2),
          30.0 * u2 * (1.0 - 2.0 * u + u2),
          60.0 * u * (1.0 - 3.0 * u + 2.0 * u2)};
}

ReferenceSample Blend(const Vec3& from, const Vec3& to, double start,
                      double duration, double t) {
  const Quintic q = QuinticBlend((t - start) / duration);
  const Vec3 delta = to - from;
  return {from + q.s * delta, (q.ds / duration) * delta,
          (q.dds / (duration * duration)) * delta};
}

}  // namespace

void ValidateReference(const ReferenceSignal& ref) {
  std::visit(
      [](const auto& r) {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, ConstantReference>) {
          if (!r.point.allFinite()) throw ConfigError("reference point not finite");
        } else if constexpr (std::is_same_v<T, SmoothStepReference>) {
          if (!r.from.allFinite() || !r.to.allFinite() ||
              !std::isfinite(r.start)) {
            throw ConfigError("smooth-step reference not finite");
          }
          if (!(r.duration > 0.0)) {
            throw ConfigError("smooth-step duration must be > 0");
          }
        } else {
          if (r.points.empty()) throw ConfigError("waypoint list is empty");
          for (const auto& p : r.points) {
            if (!p.allFinite()) throw ConfigError("waypoint not finite");
          }
          if (!(r.segment_duration > 0.0)) {
            throw ConfigError("waypoint segment_duration must be > 0");
          }
        }
      },
      ref);
}

ReferenceSample EvalReference(const ReferenceSignal& ref, double t) {
  return std::visit(
      [t](const auto& r) -> ReferenceSample {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, ConstantReference>) {
          return {r.point, Vec3::Zero(), Vec3::Zero()};
        } else if constexpr (std::is_same_v<T, SmoothStepReference>) {
          return Blend(r.from, r.to, r.start, r.duration, t);
        } else {
          const auto segments = static_cast<double>(r.points.size() - 1);
          if (r.points.size() == 1 || t >= segments * r.segment_duration) {
            return {r.points.back(), Vec3::Zero(), Vec3::Zero()};
          }
          if (t <= 0.0) return {r.points.front(), Vec3::Zero(), Vec3::Zero()};
          const auto k = static_cast<std::size_t>(t / r.segment_duration);
          return Blend(r.points[k], r.points[k + 1],
                       static_cast<double>(k) * r.segment_duration,
                       r.segment_duration, t);
        }
      },
      ref);
}

}  // namespace flyer
