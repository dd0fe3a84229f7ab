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

#include "flyer/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string_view>
#include <type_traits>

namespace flyer {
namespace {

using nlohmann::json;

[[noreturn]] void Fail(const std::string& where, const std::string& what) {
  throw ConfigError(where + ": " + what);
}

double Number(const json& j, const std::string& where) {
  if (!j.is_number()) Fail(where, "expected a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) Fail(where, "must be finite");
  return x;
}

template <int N>
Eigen::Matrix<double, N, 1> Vector(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != N) {
    Fail(where, "expected an array of " + std::to_string(N) + " numbers");
  }
  Eigen::Matrix<double, N, 1> v;
  for (int i = 0; i < N; ++i) {
    v[i] = Number(j[static_cast<std::size_t>(i)], where);
  }
  return v;
}

template <typename Derived>
json ToJson(const Eigen::MatrixBase<Derived>& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

json MatrixRows(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    rows.push_back(ToJson(Eigen::VectorXd(m.row(r).transpose())));
  }
  return rows;
}

Eigen::MatrixXd ParseRows(const json& j, Eigen::Index cols,
                          const std::string& where) {
  if (!j.is_array() || j.empty()) Fail(where, "expected a non-empty array of rows");
  Eigen::MatrixXd m(static_cast<Eigen::Index>(j.size()), cols);
  for (std::size_t r = 0; r < j.size(); ++r) {
    const json& row = j[r];
    if (!row.is_array() || row.size() != static_cast<std::size_t>(cols)) {
      Fail(where, "row " + std::to_string(r) + " must have " +
                      std::to_string(cols) + " entries");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      m(static_cast<Eigen::Index>(r), c) =
          Number(row[static_cast<std::size_t>(c)], where);
    }
  }
  return m;
}

const json* Find(const json& obj, const char* key) {
  const auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

const json& Require(const json& obj, const char* key, const std::string& where) {
  const json* j = Find(obj, key);
  if (!j) Fail(where, std::string("missing key '") + key + "'");
  return *j;
}

void RequireObject(const json& j, const std::string& where) {
  if (!j.is_object()) Fail(where, "expected an object");
}

void OnlyKeys(const json& j, const std::string& where,
              std::initializer_list<std::string_view> allowed) {
  for (const auto& item : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end()) {
      Fail(where, "unknown key '" + item.key() + "'");
    }
  }
}

// --- network ---------------------------------------------------------------

NetworkSpec ParseNetwork(const json& j, const std::string& where) {
  RequireObject(j, where);
  OnlyKeys(j, where, {"grid", "centers", "bandwidths"});
  NetworkSpec spec;
  if (const json* g = Find(j, "grid")) {
    RequireObject(*g, where + ".grid");
    OnlyKeys(*g, where + ".grid", {"lo", "hi", "counts", "sigma_scale"});
    GridSpec grid;
    grid.lo = Vector<6>(Require(*g, "lo", where), where + ".grid.lo");
    grid.hi = Vector<6>(Require(*g, "hi", where), where + ".grid.hi");
    const json& counts = Require(*g, "counts", where + ".grid");
    if (!counts.is_array() || counts.size() != 6) {
      Fail(where + ".grid.counts", "expected 6 integers");
    }
    for (std::size_t k = 0; k < 6; ++k) {
      if (!counts[k].is_number_integer() || counts[k].get<long long>() < 1) {
        Fail(where + ".grid.counts", "entries must be integers >= 1");
      }
      grid.counts[k] = counts[k].get<int>();
    }
    if (const json* s = Find(*g, "sigma_scale")) {
      grid.sigma_scale = Number(*s, where + ".grid.sigma_scale");
    }
    spec.grid = grid;
  } else {
    const json& centers = Require(j, "centers", where);
    const json& sigmas = Require(j, "bandwidths", where);
    if (!centers.is_array() || !sigmas.is_array()) {
      Fail(where, "centers and bandwidths must be arrays");
    }
    for (const auto& c : centers) spec.centers.push_back(Vector<6>(c, where + ".centers"));
    for (const auto& s : sigmas) spec.bandwidths.push_back(Number(s, where + ".bandwidths"));
  }
  spec.Build();  // validates
  return spec;
}

json SerializeNetwork(const NetworkSpec& spec) {
  if (spec.grid) {
    json counts = json::array();
    for (int c : spec.grid->counts) counts.push_back(c);
    return {{"grid",
             {{"lo", ToJson(spec.grid->lo)},
              {"hi", ToJson(spec.grid->hi)},
              {"counts", counts},
              {"sigma_scale", spec.grid->sigma_scale}}}};
  }
  json centers = json::array();
  for (const auto& c : spec.centers) centers.push_back(ToJson(c));
  return {{"centers", centers}, {"bandwidths", spec.bandwidths}};
}

// --- disturbance -----------------------------------------------------------

DisturbanceSpec ParseDisturbance(const json& j, const std::string& where) {
  RequireObject(j, where);
  const json& type_j = Require(j, "type", where);
  if (!type_j.is_string()) Fail(where + ".type", "expected a string");
  const std::string type = type_j.get<std::string>();
  DisturbanceSpec spec;
  if (type == "zero") {
    spec.kind = ZeroDisturbance{};
  } else if (type == "constant_bias") {
    spec.kind = ConstantBias{Vector<3>(Require(j, "bias", where), where + ".bias")};
  } else if (type == "sinusoid") {
    Sinusoid s;
    s.amplitude = Vector<3>(Require(j, "amplitude", where), where + ".amplitude");
    s.frequency = Number(Require(j, "frequency", where), where + ".frequency");
    if (const json* p = Find(j, "phase")) s.phase = Number(*p, where + ".phase");
    spec.kind = s;
  } else if (type == "tether_spring") {
    TetherSpring t;
    t.anchor = Vector<3>(Require(j, "anchor", where), where + ".anchor");
    t.stiffness = Number(Require(j, "stiffness", where), where + ".stiffness");
    spec.kind = t;
  } else if (type == "rbf_truth") {
    RbfTruthSpec t;
    const json& net = Require(j, "network", where);
    if (net.is_string()) {
      if (net.get<std::string>() != "controller") {
        Fail(where + ".network", "expected \"controller\" or a network object");
      }
    } else {
      t.network = ParseNetwork(net, where + ".network");
    }
    t.weights = ParseRows(Require(j, "weights", where), 3, where + ".weights");
    spec.kind = std::move(t);
  } else if (type == "composite") {
    CompositeSpec c;
    const json& terms = Require(j, "terms", where);
    if (!terms.is_array()) Fail(where + ".terms", "expected an array");
    for (std::size_t i = 0; i < terms.size(); ++i) {
      c.terms.push_back(
          ParseDisturbance(terms[i], where + ".terms[" + std::to_string(i) + "]"));
    }
    spec.kind = std::move(c);
  } else {
    Fail(where + ".type", "unknown disturbance type '" + type + "'");
  }
  return spec;
}

json SerializeDisturbance(const DisturbanceSpec& spec) {
  return std::visit(
      [](const auto& d) -> json {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, ZeroDisturbance>) {
          return {{"type", "zero"}};
        } else if constexpr (std::is_same_v<T, ConstantBias>) {
          return {{"type", "constant_bias"}, {"bias", ToJson(d.bias)}};
        } else if constexpr (std::is_same_v<T, Sinusoid>) {
          return {{"type", "sinusoid"},
                  {"amplitude", ToJson(d.amplitude)},
                  {"frequency", d.frequency},
                  {"phase", d.phase}};
        } else if constexpr (std::is_same_v<T, TetherSpring>) {
          return {{"type", "tether_spring"},
                  {"anchor", ToJson(d.anchor)},
                  {"stiffness", d.stiffness}};
        } else if constexpr (std::is_same_v<T, RbfTruthSpec>) {
          return {{"type", "rbf_truth"},
                  {"network", d.network ? SerializeNetwork(*d.network)
                                        : json("controller")},
                  {"weights", MatrixRows(d.weights)}};
        } else {
          json terms = json::array();
          for (const auto& t : d.terms) terms.push_back(SerializeDisturbance(t));
          return {{"type", "composite"}, {"terms", terms}};
        }
      },
      spec.kind);
}

// --- reference -------------------------------------------------------------

ReferenceSignal ParseReference(const json& j, const std::string& where) {
  RequireObject(j, where);
  const json& type_j = Require(j, "type", where);
  if (!type_j.is_string()) Fail(where + ".type", "expected a string");
  const std::string type = type_j.get<std::string>();
  ReferenceSignal ref;
  if (type == "constant") {
    ref = ConstantReference{Vector<3>(Require(j, "point", where), where + ".point")};
  } else if (type == "smooth_step") {
    SmoothStepReference s;
    s.from = Vector<3>(Require(j, "from", where), where + ".from");
    s.to = Vector<3>(Require(j, "to", where), where + ".to");
    s.start = Number(Require(j, "start", where), where + ".start");
    s.duration = Number(Require(j, "duration", where), where + ".duration");
    ref = s;
  } else if (type == "waypoints") {
    WaypointReference w;
    const json& pts = Require(j, "points", where);
    if (!pts.is_array()) Fail(where + ".points", "expected an array");
    for (const auto& p : pts) w.points.push_back(Vector<3>(p, where + ".points"));
    w.segment_duration =
        Number(Require(j, "segment_duration", where), where + ".segment_duration");
    ref = std::move(w);
  } else {
    Fail(where + ".type", "unknown reference type '" + type + "'");
  }
  try {
    ValidateReference(ref);
  } catch (const ConfigError& e) {
    Fail(where, e.what());
  }
  return ref;
}

json SerializeReference(const ReferenceSignal& ref) {
  return std::visit(
      [](const auto& r) -> json {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, ConstantReference>) {
          return {{"type", "constant"}, {"point", ToJson(r.point)}};
        } else if constexpr (std::is_same_v<T, SmoothStepReference>) {
          return {{"type", "smooth_step"},
                  {"from", ToJson(r.from)},
                  {"to", ToJson(r.to)},
                  {"start", r.start},
                  {"duration", r.duration}};
        } else {
          json pts = json::array();
          for (const auto& p : r.points) pts.push_back(ToJson(p));
          return {{"type", "waypoints"},
                  {"points", pts},
                  {"segment_duration", r.segment_duration}};
        }
      },
      ref);
}

StepScheme ParseScheme(const json& j) {
  if (j == "coupled_rk4") return StepScheme::kCoupledRk4;
  if (j == "sampled_euler") return StepScheme::kSampledEuler;
  Fail("adaptation.scheme", "expected \"coupled_rk4\" or \"sampled_euler\"");
}

std::uint64_t Unsigned(const json& j, const std::string& where) {
  if (!j.is_number_unsigned()) Fail(where, "expected a non-negative integer");
  return j.get<std::uint64_t>();
}

}  // namespace

RbfNetwork NetworkSpec::Build() const {
  if (grid) return BuildGridNetwork(*grid);
  return RbfNetwork(centers, bandwidths);
}

DisturbanceSource BuildDisturbance(const DisturbanceSpec& spec,
                                   const RbfNetwork& controller_network) {
  return std::visit(
      [&](const auto& d) -> DisturbanceSource {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, RbfTruthSpec>) {
          RbfNetwork net = d.network ? d.network->Build() : controller_network;
          if (static_cast<std::size_t>(d.weights.rows()) != net.size()) {
            throw ConfigError("rbf_truth weights have " +
                              std::to_string(d.weights.rows()) +
                              " rows but the network has " +
                              std::to_string(net.size()) + " kernels");
          }
          return {RbfTruth{std::move(net), WeightMatrix(d.weights)}};
        } else if constexpr (std::is_same_v<T, CompositeSpec>) {
          Composite c;
          for (const auto& t : d.terms) {
            c.terms.push_back(BuildDisturbance(t, controller_network));
          }
          return {std::move(c)};
        } else {
          return {d};
        }
      },
      spec.kind);
}

RunConfig DefaultConfig() {
  RunConfig c;
  c.gains = GainSet::PolePlacement(c.plant.mass, c.plant.gravity, {6.0, 8.0, 10.0},
                                   1e-4);
  const Vec3 r_d(0.0, 0.0, 0.1);
  c.reference = ConstantReference{r_d};
  GridSpec grid;
  grid.lo << r_d.array() - 0.2, Vec3::Constant(-0.5);
  grid.hi << r_d.array() + 0.2, Vec3::Constant(0.5);
  grid.counts = {3, 3, 3, 1, 1, 1};
  grid.sigma_scale = 1.0;
  c.network.grid = grid;

  // Composite scenario sized against the hover force m g ~ 9.32e-4 N.
  CompositeSpec composite;
  composite.terms.push_back({ConstantBias{Vec3(1.4e-4, -9.3e-5, -1.12e-4)}});
  composite.terms.push_back({Sinusoid{Vec3(9.3e-5, 9.3e-5, 4.7e-5), 0.5, 0.0}});
  composite.terms.push_back({TetherSpring{Vec3::Zero(), 9.3e-4}});
  c.disturbance.kind = std::move(composite);
  return c;
}

RunConfig ParseConfig(const json& doc) {
  RequireObject(doc, "config");
  OnlyKeys(doc, "config",
           {"plant", "gains", "adaptation", "network", "disturbance",
            "reference", "trial", "output_dir"});
  RunConfig c = DefaultConfig();

  if (const json* p = Find(doc, "plant")) {
    RequireObject(*p, "plant");
    OnlyKeys(*p, "plant", {"mass", "gravity", "force_limit"});
    if (const json* m = Find(*p, "mass")) c.plant.mass = Number(*m, "plant.mass");
    if (const json* g = Find(*p, "gravity")) c.plant.gravity = Number(*g, "plant.gravity");
    if (const json* f = Find(*p, "force_limit")) {
      if (f->is_null()) {
        c.plant.force_limit.reset();
      } else {
        c.plant.force_limit = Number(*f, "plant.force_limit");
      }
    }
    try {
      c.plant.Validate();
    } catch (const ConfigError& e) {
      Fail("plant", e.what());
    }
  }

  double gamma = c.gains.gamma;
  if (const json* a = Find(doc, "adaptation")) {
    RequireObject(*a, "adaptation");
    OnlyKeys(*a, "adaptation", {"gamma", "q_weights", "scheme"});
    if (const json* g = Find(*a, "gamma")) gamma = Number(*g, "adaptation.gamma");
    if (const json* q = Find(*a, "q_weights")) {
      c.q_weights = Vector<3>(*q, "adaptation.q_weights");
      if ((c.q_weights.array() <= 0.0).any()) {
        Fail("adaptation.q_weights", "weights must be > 0");
      }
    }
    if (const json* s = Find(*a, "scheme")) c.scheme = ParseScheme(*s);
  }

  if (const json* g = Find(doc, "gains")) {
    RequireObject(*g, "gains");
    OnlyKeys(*g, "gains", {"poles", "kp", "ki", "kd"});
    if (const json* poles = Find(*g, "poles")) {
      const Vec3 p = Vector<3>(*poles, "gains.poles");
      if ((p.array() <= 0.0).any()) Fail("gains.poles", "pole magnitudes must be > 0");
      c.gains = GainSet::PolePlacement(c.plant.mass, c.plant.gravity,
                                       {p[0], p[1], p[2]}, gamma);
    } else {
      c.gains.kp = Vector<3>(Require(*g, "kp", "gains"), "gains.kp");
      c.gains.ki = Vector<3>(Require(*g, "ki", "gains"), "gains.ki");
      c.gains.kd = Vector<3>(Require(*g, "kd", "gains"), "gains.kd");
    }
  } else {
    c.gains = GainSet::PolePlacement(c.plant.mass, c.plant.gravity,
                                     {6.0, 8.0, 10.0}, gamma);
  }
  c.gains.mass = c.plant.mass;
  c.gains.gravity = c.plant.gravity;
  c.gains.gamma = gamma;
  try {
    c.gains.Validate();
  } catch (const ConfigError& e) {
    Fail("gains", e.what());
  }

  if (const json* n = Find(doc, "network")) {
    try {
      c.network = ParseNetwork(*n, "network");
    } catch (const ConfigError&) {
      throw;
    } catch (const Error& e) {
      Fail("network", e.what());
    }
  }
  if (const json* d = Find(doc, "disturbance")) {
    c.disturbance = ParseDisturbance(*d, "disturbance");
  }
  if (const json* r = Find(doc, "reference")) {
    c.reference = ParseReference(*r, "reference");
  }

  if (const json* t = Find(doc, "trial")) {
    RequireObject(*t, "trial");
    OnlyKeys(*t, "trial",
             {"count", "duration", "dt", "seed_base", "initial_offset",
              "noise_std"});
    if (const json* n = Find(*t, "count")) {
      c.trials = static_cast<std::size_t>(Unsigned(*n, "trial.count"));
      if (c.trials == 0) Fail("trial.count", "must be >= 1");
    }
    if (const json* x = Find(*t, "duration")) c.duration = Number(*x, "trial.duration");
    if (const json* x = Find(*t, "dt")) c.dt = Number(*x, "trial.dt");
    if (const json* x = Find(*t, "seed_base")) c.seed_base = Unsigned(*x, "trial.seed_base");
    if (const json* x = Find(*t, "initial_offset")) {
      c.initial_offset = Vector<3>(*x, "trial.initial_offset");
    }
    if (const json* x = Find(*t, "noise_std")) {
      c.noise_std = Number(*x, "trial.noise_std");
      if (c.noise_std < 0.0) Fail("trial.noise_std", "must be >= 0");
    }
  }
  if (!(c.duration > 0.0)) Fail("trial.duration", "must be > 0");
  if (!(c.dt > 0.0)) Fail("trial.dt", "must be > 0");
  TrialSpec probe;
  probe.duration = c.duration;
  probe.dt = c.dt;
  try {
    probe.Steps();
  } catch (const ConfigError& e) {
    Fail("trial", e.what());
  }

  if (const json* o = Find(doc, "output_dir")) {
    if (!o->is_string()) Fail("output_dir", "expected a string");
    c.output_dir = o->get<std::string>();
  }

  // Resolve the disturbance once so shape errors surface at parse time.
  try {
    const DisturbanceSource src = BuildDisturbance(c.disturbance, c.network.Build());
    ValidateDisturbance(src);
  } catch (const ConfigError& e) {
    Fail("disturbance", e.what());
  } catch (const Error& e) {
    Fail("disturbance", e.what());
  }
  return c;
}

json SerializeConfig(const RunConfig& c) {
  return {
      {"plant",
       {{"mass", c.plant.mass},
        {"gravity", c.plant.gravity},
        {"force_limit", c.plant.force_limit ? json(*c.plant.force_limit) : json(nullptr)}}},
      {"gains",
       {{"kp", ToJson(c.gains.kp)}, {"ki", ToJson(c.gains.ki)}, {"kd", ToJson(c.gains.kd)}}},
      {"adaptation",
       {{"gamma", c.gains.gamma},
        {"q_weights", ToJson(c.q_weights)},
        {"scheme", ToString(c.scheme)}}},
      {"network", SerializeNetwork(c.network)},
      {"disturbance", SerializeDisturbance(c.disturbance)},
      {"reference", SerializeReference(c.reference)},
      {"trial",
       {{"count", c.trials},
        {"duration", c.duration},
        {"dt", c.dt},
        {"seed_base", c.seed_base},
        {"initial_offset", ToJson(c.initial_offset)},
        {"noise_std", c.noise_std}}},
      {"output_dir", c.output_dir},
  };
}

RunConfig LoadConfig(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return ParseConfig(doc);
}

LoopDesign BuildDesign(const RunConfig& config, ControllerKind kind) {
  return MakeLoopDesign(config.gains, config.plant, config.network.Build(),
                        config.Q(), kind, config.scheme);
}

std::vector<TrialSpec> BuildTrialSpecs(const RunConfig& config,
                                       ControllerKind kind) {
  const RbfNetwork net = config.network.Build();
  const DisturbanceSource dist = BuildDisturbance(config.disturbance, net);
  const ReferenceSample start = EvalReference(config.reference, 0.0);
  std::vector<TrialSpec> specs;
  specs.reserve(config.trials);
  for (std::size_t i = 0; i < config.trials; ++i) {
    TrialSpec s;
    s.controller = kind;
    s.duration = config.duration;
    s.dt = config.dt;
    s.seed = config.seed_base + i;
    s.disturbance = dist;
    s.reference = config.reference;
    s.initial = SimState{start.position + config.initial_offset, start.velocity, 0.0};
    s.noise_std = config.noise_std;
    specs.push_back(std::move(s));
  }
  return specs;
}

std::string ToString(ControllerKind kind) {
  return kind == ControllerKind::kAdaptive ? "adaptive" : "baseline";
}

std::string ToString(StepScheme scheme) {
  return scheme == StepScheme::kCoupledRk4 ? "coupled_rk4" : "sampled_euler";
}

}  // namespace flyer
