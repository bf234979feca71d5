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
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dualsim/dual.hpp"
#include "dualsim/scenario.hpp"
#include "dualsim/tolerances.hpp"

namespace dualsim {

/// One pass/fail line of a run. Statistical checks are not hard: a miss is
/// reported but does not fail the run.
struct CheckResult {
  std::string name;
  bool passed = false;
  double measured = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
  bool hard = true;
};

struct PerceptionEntry {
  double t = 0.0;
  std::string observer;
  std::size_t j = 0;
  std::vector<std::string> flags;
};

struct EventRecord {
  std::uint64_t event_id = 0;
  std::vector<PerceptionEntry> perceptions;
  std::vector<std::string> flags;
  std::map<std::string, double> derived;
};

struct DecoherenceCurve {
  std::vector<double> times;
  std::vector<Complex> simulated;
  std::vector<double> closed_form;
  std::vector<double> interference;
  std::vector<double> interference_expected;
};

struct RunSummary {
  std::string experiment;
  std::uint64_t seed = 0;
  std::size_t n_events = 0;
  std::string fingerprint;

  /// Keyed by record source: "O", "O'", "baseline", "O:remeasure", ...
  std::map<std::string, std::vector<double>> frequencies;
  std::vector<double> born_weights;
  std::vector<Complex> branch_phases;
  std::map<std::string, double> interference;
  /// Named instants of the experiment timeline (e.g. t1, t_mid, t2).
  std::map<std::string, double> times;
  std::map<std::string, Matrix> restricted_states;
  /// NaN when a sample has no variance.
  std::map<std::string, double> correlations;
  std::optional<DecoherenceCurve> decoherence;
  std::vector<double> couplings;
  std::optional<PerceptionTimeTable> timing;

  std::size_t density_checks = 0;
  std::vector<CheckResult> checks;
  std::vector<std::string> warnings;
  Tolerances tolerances = kTol;

  /// True when every hard check passed.
  bool passed() const;
  const CheckResult* find_check(const std::string& name) const;
};

struct RunResult {
  RunSummary summary;
  std::vector<EventRecord> records;
};

struct RunOptions {
  /// Process events on all OpenMP threads. Results do not depend on it.
  bool parallel = true;
};

/// Runs the scenario's experiment. Throws DimensionCapExceeded, ScenarioError
/// for parameter combinations that cannot run (e.g. an incomplete
/// measurement), and InvariantBreach when any intermediate state fails its
/// checks.
RunResult run(const Scenario& scenario, const RunOptions& options = {});

/// Pearson correlation of two index samples; NaN when either has no variance.
/// Exactly 1 for identical samples.
double index_correlation(const std::vector<std::size_t>& x, const std::vector<std::size_t>& y);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view text);

/// "dualsim <version> scenario:<fnv1a hex>".
std::string fingerprint(const Scenario& scenario);

}  // namespace dualsim
