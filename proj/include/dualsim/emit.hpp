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

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dualsim/runner.hpp"
#include "dualsim/scenario.hpp"

namespace dualsim {

/// Summary as JSON. Complex numbers are [re, im]; matrices are row lists.
nlohmann::json summary_json(const RunSummary& summary);
nlohmann::json records_json(const std::vector<EventRecord>& records);

/// One row per perception entry: event_id,t_perceive,j,flags. Flags are the
/// entry's and the event's tags plus "obs=<label>", joined with '|'.
std::string records_csv(const std::vector<EventRecord>& records);

struct EmittedFiles {
  std::filesystem::path summary;
  std::filesystem::path events;
};

/// Writes summary.json and events.csv or events.json into `dir` (created if
/// missing). Throws Error when the directory or files cannot be written.
EmittedFiles emit(const RunSummary& summary, const std::vector<EventRecord>& records,
                  OutputFormat format, const std::filesystem::path& dir);

}  // namespace dualsim
