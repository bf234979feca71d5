// Copyright 2026 The dualsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dualsim/scenario.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

namespace dualsim {

namespace {

std::size_t line_of(const YAML::Node& node) {
  const auto mark = node.Mark();
  return mark.line >= 0 ? static_cast<std::size_t>(mark.line) + 1 : 0;
}

[[noreturn]] void fail(const std::string& field, const YAML::Node& node, const std::string& msg) {
  throw ScenarioError(field, line_of(node), msg);
}

void require_map(const YAML::Node& node, const std::string& field) {
  if (!node.IsMap()) fail(field, node, "expected a mapping");
}

void reject_unknown(const YAML::Node& node, const std::string& section,
                    const std::set<std::string>& allowed) {
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.count(key)) {
      const std::string field = section.empty() ? key : section + "." + key;
      fail(field, kv.first, "unknown key '" + key + "'");
    }
  }
}

template <typename T>
T scalar(const YAML::Node& node, const std::string& field) {
  if (!node.IsScalar()) fail(field, node, "expected a scalar value");
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    fail(field, node, "cannot convert '" + node.Scalar() + "'");
  }
}

std::size_t count(const YAML::Node& node, const std::string& field) {
  const auto v = scalar<long long>(node, field);
  if (v < 0) fail(field, node, "must be nonnegative");
  return static_cast<std::size_t>(v);
}

double real(const YAML::Node& node, const std::string& field) {
  const double v = scalar<double>(node, field);
  if (!std::isfinite(v)) fail(field, node, "must be finite");
  return v;
}

Complex complex_entry(const YAML::Node& node, const std::string& field) {
  if (node.IsScalar()) return {real(node, field), 0.0};
  if (node.IsSequence() && node.size() == 2) {
    return {real(node[0], field), real(node[1], field)};
  }
  fail(field, node, "expected a real number or a [re, im] pair");
}

std::vector<double> real_list(const YAML::Node& node, const std::string& field) {
  if (!node.IsSequence()) fail(field, node, "expected a list");
  std::vector<double> out;
  for (const auto& item : node) out.push_back(real(item, field));
  return out;
}

}  // namespace

ScenarioError::ScenarioError(const std::string& field, std::size_t line,
                             const std::string& message)
    : Error((line ? "line " + std::to_string(line) + ": " : std::string()) + field + ": " +
            message),
      field_(field),
      line_(line) {}

std::string_view to_string(Experiment e) {
  switch (e) {
    case Experiment::kPremeasure:
      return "premeasure";
    case Experiment::kUndo:
      return "undo";
    case Experiment::kTwoObserver:
      return "two_observer";
    case Experiment::kDecohere:
      return "decohere";
    case Experiment::kReductionCompare:
      return "reduction_compare";
    case Experiment::kPerceptionTiming:
      return "perception_timing";
  }
  return "unknown";
}

std::string_view to_string(PerceptionMode m) {
  return m == PerceptionMode::kAtEnd ? "at_end" : "sampled";
}

std::string_view to_string(OutputFormat f) { return f == OutputFormat::kJson ? "json" : "csv"; }

std::optional<Experiment> parse_experiment(std::string_view name) {
  for (auto e : {Experiment::kPremeasure, Experiment::kUndo, Experiment::kTwoObserver,
                 Experiment::kDecohere, Experiment::kReductionCompare,
                 Experiment::kPerceptionTiming}) {
    if (to_string(e) == name) return e;
  }
  return std::nullopt;
}

std::optional<OutputFormat> parse_format(std::string_view name) {
  if (name == "json") return OutputFormat::kJson;
  if (name == "csv") return OutputFormat::kCsv;
  return std::nullopt;
}

Scenario parse_scenario(std::string_view text) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::ParserException& e) {
    throw ScenarioError("document", static_cast<std::size_t>(e.mark.line + 1), e.msg);
  }
  if (!root.IsMap()) throw ScenarioError("document", 0, "expected a mapping at top level");
  reject_unknown(root, "", {"experiment", "seed", "events", "system", "measurement",
                            "perception", "environment", "limits", "output"});

  Scenario sc;
  if (!root["experiment"]) throw ScenarioError("experiment", 0, "missing required key");
  {
    const auto name = scalar<std::string>(root["experiment"], "experiment");
    const auto e = parse_experiment(name);
    if (!e) fail("experiment", root["experiment"], "unknown experiment '" + name + "'");
    sc.experiment = *e;
  }
  if (!root["seed"]) throw ScenarioError("seed", 0, "missing required key (no wall-clock seeding)");
  sc.seed = scalar<std::uint64_t>(root["seed"], "seed");
  if (root["events"]) sc.n_events = count(root["events"], "events");

  if (!root["system"]) throw ScenarioError("system", 0, "missing required section");
  {
    const auto sys = root["system"];
    require_map(sys, "system");
    reject_unknown(sys, "system", {"amplitudes", "s_dim", "o_dim"});
    if (!sys["amplitudes"]) throw ScenarioError("system.amplitudes", line_of(sys), "missing");
    const auto amps = sys["amplitudes"];
    if (!amps.IsSequence() || amps.size() == 0) {
      fail("system.amplitudes", amps, "expected a nonempty list");
    }
    sc.amplitudes.resize(static_cast<Eigen::Index>(amps.size()));
    for (std::size_t k = 0; k < amps.size(); ++k) {
      sc.amplitudes[static_cast<Eigen::Index>(k)] = complex_entry(amps[k], "system.amplitudes");
    }
    sc.s_dim = sys["s_dim"] ? count(sys["s_dim"], "system.s_dim") : amps.size();
    if (sc.s_dim != amps.size()) {
      fail("system.amplitudes", amps, "expected " + std::to_string(sc.s_dim) + " amplitudes");
    }
    sc.o_dim = sys["o_dim"] ? count(sys["o_dim"], "system.o_dim") : sc.s_dim + 1;
  }

  if (const auto m = root["measurement"]) {
    require_map(m, "measurement");
    reject_unknown(m, "measurement", {"delta_t", "lambda"});
    if (m["delta_t"]) sc.delta_t = real(m["delta_t"], "measurement.delta_t");
    if (m["lambda"]) sc.lambda = real(m["lambda"], "measurement.lambda");
  }

  if (const auto p = root["perception"]) {
    require_map(p, "perception");
    reject_unknown(p, "perception", {"mode", "grid_points", "hold_steps", "hold_step"});
    if (p["mode"]) {
      const auto mode = scalar<std::string>(p["mode"], "perception.mode");
      if (mode == "at_end") {
        sc.perception_mode = PerceptionMode::kAtEnd;
      } else if (mode == "sampled") {
        sc.perception_mode = PerceptionMode::kSampled;
      } else {
        fail("perception.mode", p["mode"], "expected 'at_end' or 'sampled'");
      }
    }
    if (p["grid_points"]) sc.timing_grid_points = count(p["grid_points"], "perception.grid_points");
    if (p["hold_steps"]) sc.hold_steps = count(p["hold_steps"], "perception.hold_steps");
    if (p["hold_step"]) sc.hold_step = real(p["hold_step"], "perception.hold_step");
  } else if (sc.experiment == Experiment::kPerceptionTiming) {
    sc.perception_mode = PerceptionMode::kSampled;
  }

  if (const auto e = root["environment"]) {
    require_map(e, "environment");
    reject_unknown(e, "environment",
                   {"n_atoms", "coupling_range", "pointer_values", "time_points", "t_max"});
    EnvironmentConfig env;
    if (e["n_atoms"]) env.n_atoms = count(e["n_atoms"], "environment.n_atoms");
    if (e["coupling_range"]) {
      const auto range = real_list(e["coupling_range"], "environment.coupling_range");
      if (range.size() != 2 || range[0] > range[1]) {
        fail("environment.coupling_range", e["coupling_range"], "expected [min, max] with min <= max");
      }
      env.coupling_min = range[0];
      env.coupling_max = range[1];
    }
    if (e["pointer_values"]) {
      env.pointer_values = real_list(e["pointer_values"], "environment.pointer_values");
    }
    if (e["time_points"]) env.time_points = count(e["time_points"], "environment.time_points");
    if (e["t_max"]) env.t_max = real(e["t_max"], "environment.t_max");
    sc.environment = env;
  }

  if (const auto l = root["limits"]) {
    require_map(l, "limits");
    reject_unknown(l, "limits", {"max_dim"});
    if (l["max_dim"]) sc.max_dim = count(l["max_dim"], "limits.max_dim");
  }

  if (const auto o = root["output"]) {
    require_map(o, "output");
    reject_unknown(o, "output", {"dir", "format"});
    if (o["dir"]) sc.output_dir = scalar<std::string>(o["dir"], "output.dir");
    if (o["format"]) {
      const auto name = scalar<std::string>(o["format"], "output.format");
      const auto f = parse_format(name);
      if (!f) fail("output.format", o["format"], "expected 'json' or 'csv'");
      sc.format = *f;
    }
  }

  if (sc.lambda == 0.0 && sc.delta_t > 0.0) sc.lambda = std::numbers::pi / (2.0 * sc.delta_t);
  validate_scenario(sc);
  return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("document", 0, "cannot read " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_scenario(text.str());
}

void validate_scenario(Scenario& sc) {
  if (sc.n_events < 1) throw ScenarioError("events", 0, "must be at least 1");
  if (sc.s_dim < 2) throw ScenarioError("system.s_dim", 0, "must be at least 2");
  if (static_cast<std::size_t>(sc.amplitudes.size()) != sc.s_dim) {
    throw ScenarioError("system.amplitudes", 0, "length must equal s_dim");
  }
  if (sc.o_dim < sc.s_dim + 1) {
    throw ScenarioError("system.o_dim", 0, "must be at least s_dim + 1");
  }
  if (!(sc.delta_t > 0.0)) throw ScenarioError("measurement.delta_t", 0, "must be positive");
  if (sc.lambda == 0.0) sc.lambda = std::numbers::pi / (2.0 * sc.delta_t);

  const double norm = sc.amplitudes.norm();
  if (!(norm > 0.0)) throw ScenarioError("system.amplitudes", 0, "all amplitudes are zero");
  if (std::abs(norm - 1.0) > kTol.amplitude_norm) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "amplitudes had norm " << norm << "; normalized";
    sc.warnings.push_back(msg.str());
  }
  // Always rescale so downstream unit-norm checks see an exact unit vector.
  sc.amplitudes /= norm;

  if (sc.timing_grid_points < 2) {
    throw ScenarioError("perception.grid_points", 0, "must be at least 2");
  }
  if (!(sc.hold_step > 0.0)) throw ScenarioError("perception.hold_step", 0, "must be positive");

  if (sc.experiment == Experiment::kDecohere && !sc.environment) sc.environment = EnvironmentConfig{};
  if (sc.environment) {
    auto& env = *sc.environment;
    if (env.pointer_values.empty()) env.pointer_values = default_pointer_values(sc.o_dim);
    try {
      EnvironmentModel{std::vector<double>(env.n_atoms, 1.0), env.pointer_values}.validate(sc.s_dim,
                                                                                       sc.o_dim);
    } catch (const InvalidArgument& e) {
      throw ScenarioError("environment.pointer_values", 0, e.what());
    }
    if (env.time_points < 1) throw ScenarioError("environment.time_points", 0, "must be at least 1");
    if (env.t_max < 0.0) throw ScenarioError("environment.t_max", 0, "must be nonnegative");
  }
}

std::string canonical_text(const Scenario& sc) {
  std::ostringstream out;
  out.precision(17);
  out << "experiment=" << to_string(sc.experiment) << ";seed=" << sc.seed
      << ";events=" << sc.n_events << ";s_dim=" << sc.s_dim << ";o_dim=" << sc.o_dim
      << ";delta_t=" << sc.delta_t << ";lambda=" << sc.lambda << ";amplitudes=";
  for (Eigen::Index k = 0; k < sc.amplitudes.size(); ++k) {
    out << '(' << sc.amplitudes[k].real() << ',' << sc.amplitudes[k].imag() << ')';
  }
  out << ";perception=" << to_string(sc.perception_mode) << ',' << sc.timing_grid_points << ','
      << sc.hold_steps << ',' << sc.hold_step << ";max_dim=" << sc.max_dim;
  if (sc.environment) {
    const auto& e = *sc.environment;
    out << ";env=" << e.n_atoms << ',' << e.coupling_min << ',' << e.coupling_max << ','
        << e.time_points << ',' << e.t_max << ",q=";
    for (double q : e.pointer_values) out << q << ' ';
  }
  return out.str();
}

}  // namespace dualsim
