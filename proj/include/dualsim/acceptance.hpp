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
#include <string>
#include <vector>

namespace dualsim {

inline constexpr std::uint64_t kDefaultSeed = 12345;

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
};

struct AcceptanceOptions {
  std::uint64_t seed = kDefaultSeed;
  /// Scratch space for the determinism criterion's output files.
  std::filesystem::path work_dir = std::filesystem::temp_directory_path() / "dualsim-acceptance";
};

/// Runs the ten acceptance criteria in order. Never throws for a failing
/// criterion; an exception inside one is reported as its failure.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options = {});

/// "PASS  3 name: detail" / "FAIL ...".
std::string format_result(const CriterionResult& r);

}  // namespace dualsim
