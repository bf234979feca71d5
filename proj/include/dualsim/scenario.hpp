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

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dualsim/errors.hpp"
#include "dualsim/measurement.hpp"

namespace dualsim {

enum class Experiment {
  kPremeasure,
  kUndo,
  kTwoObserver,
  kDecohere,
  kReductionCompare,
  kPerceptionTiming,
};

/// When the perception record is stamped: at the end of the measurement
/// window, or at a time drawn from the perception-time density.
enum class PerceptionMode { kAtEnd, kSampled };

enum class OutputFormat { kJson, kCsv };

std::string_view to_string(Experiment e);
std::string_view to_string(PerceptionMode m);
std::string_view to_string(OutputFormat f);
std::optional<Experiment> parse_experiment(std::string_view name);
std::optional<OutputFormat> parse_format(std::string_view name);

struct EnvironmentConfig {
  std::size_t n_atoms = 8;
  double coupling_min = 0.5;
  double coupling_max = 1.5;
  /// Empty means default_pointer_values(o_dim).
  std::vector<double> pointer_values;
  std::size_t time_points = 50;
  double t_max = 2.0;
};

struct Scenario {
  Experiment experiment = Experiment::kPremeasure;
  Vector amplitudes;
  std::size_t s_dim = 2;
  std::size_t o_dim = 3;
  double delta_t = 1.0;
  double lambda = 0.0;  // filled with π / (2 Δt) when not given
  std::optional<EnvironmentConfig> environment;
  std::size_t n_events = 1;
  std::uint64_t seed = 0;
  PerceptionMode perception_mode = PerceptionMode::kAtEnd;
  std::size_t timing_grid_points = 1001;
  /// Branch-preserving evolution steps applied after perception.
  std::size_t hold_steps = 0;
  double hold_step = 0.1;
  std::size_t max_dim = kDefaultMaxDim;
  std::string output_dir = "out";
  OutputFormat format = OutputFormat::kJson;

  /// Non-fatal notes from loading (e.g. renormalized amplitudes).
  std::vector<std::string> warnings;

  MeasurementModel model() const { return {s_dim, o_dim, lambda, delta_t}; }
};

/// Invalid scenario document. `line` is 1-based, 0 when unknown.
class ScenarioError : public Error {
 public:
  ScenarioError(const std::string& field, std::size_t line, const std::string& message);

  const std::string& field() const { return field_; }
  std::size_t line() const { return line_; }

 private:
  std::string field_;
  std::size_t line_;
};

/// Parses and validates a YAML scenario document. Unknown keys are errors.
Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::filesystem::path& path);

/// Checks all Scenario invariants; throws ScenarioError. Amplitudes off unit
/// norm by more than the tolerance are normalized with a warning.
void validate_scenario(Scenario& scenario);

/// Canonical text form used for fingerprints.
std::string canonical_text(const Scenario& scenario);

}  // namespace dualsim
