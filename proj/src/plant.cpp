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

#include "flyer/plant.hpp"

#include <cmath>
#include <numbers>
#include <type_traits>

#include "flyer/integrator.hpp"

namespace flyer {

void PlantParams::Validate() const {
  if (!(mass > 0.0) || !std::isfinite(mass)) {
    throw ConfigError("plant mass must be finite and > 0");
  }
  if (!(gravity >= 0.0) || !std::isfinite(gravity)) {
    throw ConfigError("gravity must be finite and >= 0");
  }
  if (force_limit && (!(*force_limit > 0.0) || !std::isfinite(*force_limit))) {
    throw ConfigError("force_limit must be finite and > 0");
  }
}

void ValidateDisturbance(const DisturbanceSource& src) {
  std::visit(
      [](const auto& d) {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, ConstantBias>) {
          if (!d.bias.allFinite()) throw ConfigError("bias not finite");
        } else if constexpr (std::is_same_v<T, Sinusoid>) {
          if (!d.amplitude.allFinite() || !std::isfinite(d.phase) ||
              !std::isfinite(d.frequency)) {
            throw ConfigError("sinusoid parameters not finite");
          }
          if (d.frequency < 0.0) throw ConfigError("sinusoid frequency < 0");
        } else if constexpr (std::is_same_v<T, TetherSpring>) {
          if (!d.anchor.allFinite() || !std::isfinite(d.stiffness)) {
            throw ConfigError("tether parameters not finite");
          }
          if (d.stiffness < 0.0) throw ConfigError("tether stiffness < 0");
        } else if constexpr (std::is_same_v<T, RbfTruth>) {
          if (d.weights.rows() != d.network.size()) {
            throw ShapeError("RbfTruth weights do not match its network");
          }
        } else if constexpr (std::is_same_v<T, Composite>) {
          for (const auto& term : d.terms) ValidateDisturbance(term);
        }
      },
      src.kind);
}

Vec3 DisturbanceEval(const DisturbanceSource& src, const StateVec& x,
                     double t) {
  return std::visit(
      [&](const auto& d) -> Vec3 {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, ZeroDisturbance>) {
          return Vec3::Zero();
        } else if constexpr (std::is_same_v<T, ConstantBias>) {
          return d.bias;
        } else if constexpr (std::is_same_v<T, Sinusoid>) {
          const double s =
              std::sin(2.0 * std::numbers::pi * d.frequency * t + d.phase);
          return d.amplitude * s;
        } else if constexpr (std::is_same_v<T, TetherSpring>) {
          return d.stiffness * (d.anchor - x.head<3>());
        } else if constexpr (std::is_same_v<T, RbfTruth>) {
          return EvalForce(d.weights, EvalPhi(x, d.network));
        } else {
          Vec3 sum = Vec3::Zero();
          for (const auto& term : d.terms) sum += DisturbanceEval(term, x, t);
          return sum;
        }
      },
      src.kind);
}

std::optional<WeightMatrix> KnownWeights(const DisturbanceSource& src,
                                         const RbfNetwork& net) {
  if (const auto* truth = std::get_if<RbfTruth>(&src.kind)) {
    if (truth->network == net) return truth->weights;
  }
  return std::nullopt;
}

StateDerivative DynamicsDeriv(const SimState& s, const Vec3& f, const Vec3& d,
                              const PlantParams& p) {
  if (!s.r.allFinite() || !s.v.allFinite() || !f.allFinite() ||
      !d.allFinite()) {
    throw DomainError("DynamicsDeriv: non-finite input");
  }
  Vec3 accel = (f + d) / p.mass;
  accel.z() -= p.gravity;
  return {s.v, accel};
}

Vec3 ClampForce(const Vec3& f, const PlantParams& p) {
  if (!p.force_limit) return f;
  const double mag = f.norm();
  return mag > *p.force_limit ? Vec3(f * (*p.force_limit / mag)) : f;
}

SimState Rk4Step(const SimState& s, double dt, const ForceFn& force_fn,
                 const DisturbanceSource& dist, const PlantParams& p) {
  if (!(dt > 0.0)) throw DomainError("Rk4Step: dt must be > 0");
  using Packed = StateVec;
  auto deriv = [&](const Packed& y, double t) -> Packed {
    const SimState stage{y.head<3>(), y.tail<3>(), t};
    const Vec3 f = ClampForce(force_fn(stage, t), p);
    const StateDerivative sd =
        DynamicsDeriv(stage, f, DisturbanceEval(dist, y, t), p);
    Packed out;
    out << sd.r_dot, sd.v_dot;
    return out;
  };
  Packed next;
  try {
    next = Rk4Advance(s.x(), s.t, dt, deriv);
  } catch (const DomainError& e) {
    throw DivergenceError(e.what(), s.t + dt);
  }
  if (!next.allFinite()) {
    throw DivergenceError("plant state diverged", s.t + dt);
  }
  return {next.head<3>(), next.tail<3>(), s.t + dt};
}

}  // namespace flyer
