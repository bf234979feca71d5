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

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "dualsim/acceptance.hpp"
#include "dualsim/emit.hpp"
#include "dualsim/errors.hpp"
#include "dualsim/runner.hpp"
#include "dualsim/scenario.hpp"

namespace {

enum ExitCode {
  kOk = 0,
  kUsage = 1,
  kValidation = 2,
  kInvariant = 3,
  kAcceptance = 4,
};

int run_scenario(const std::string& path, std::optional<std::uint64_t> seed,
                 std::optional<std::size_t> events, const std::string& out_dir,
                 const std::string& format) {
  dualsim::Scenario sc = dualsim::load_scenario(path);
  if (seed) sc.seed = *seed;
  if (events) sc.n_events = *events;
  if (!out_dir.empty()) sc.output_dir = out_dir;
  if (!format.empty()) sc.format = *dualsim::parse_format(format);
  dualsim::validate_scenario(sc);
  for (const auto& w : sc.warnings) std::cerr << "warning: " << w << "\n";

  const auto result = dualsim::run(sc);
  const auto files = dualsim::emit(result.summary, result.records, sc.format, sc.output_dir);

  const auto& s = result.summary;
  std::printf("%s seed=%llu events=%zu\n", s.experiment.c_str(),
              static_cast<unsigned long long>(s.seed), s.n_events);
  for (const auto& c : s.checks) {
    const char* tag = c.passed ? "ok  " : (c.hard ? "FAIL" : "flag");
    std::printf("  %s %-40s measured=%.6g expected=%.6g tol=%.3g\n", tag, c.name.c_str(),
                c.measured, c.expected, c.tolerance);
  }
  std::printf("wrote %s and %s\n", files.summary.c_str(), files.events.c_str());
  return s.passed() ? kOk : kInvariant;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dual-state measurement simulator"};
  std::string scenario;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> events;
  std::string out_dir;
  std::string format;
  bool check = false;
  app.add_option("--scenario", scenario, "Scenario file (YAML)")->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "Seed; overrides the scenario file");
  app.add_option("--events", events, "Number of events; overrides the scenario file");
  app.add_option("--out", out_dir, "Output directory; overrides the scenario file");
  app.add_option("--format", format, "Event record format")->check(CLI::IsMember({"json", "csv"}));
  app.add_flag("--check", check, "Run the acceptance suite; exit 4 if any criterion fails");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }
  if (scenario.empty() && !check) {
    std::cerr << "error: --scenario or --check is required\n" << app.help();
    return kUsage;
  }

  int status = kOk;
  if (!scenario.empty()) {
    try {
      status = run_scenario(scenario, seed, events, out_dir, format);
    } catch (const dualsim::ScenarioError& e) {
      std::cerr << "scenario error: " << e.what() << "\n";
      return kValidation;
    } catch (const dualsim::DimensionCapExceeded& e) {
      std::cerr << "scenario error: " << e.what() << "\n";
      return kValidation;
    } catch (const dualsim::InvariantBreach& e) {
      std::cerr << "invariant breach: " << e.what() << "\n";
      return kInvariant;
    } catch (const dualsim::Error& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kUsage;
    }
    if (status != kOk) return status;
  }

  if (check) {
    bool ok = true;
    for (const auto& r : dualsim::run_acceptance()) {
      std::printf("%s\n", dualsim::format_result(r).c_str());
      ok = ok && r.passed;
    }
    if (!ok) return kAcceptance;
  }
  return status;
}
