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

#include "dualsim/emit.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "dualsim/errors.hpp"

namespace dualsim {

namespace {

using nlohmann::json;
using Index = Eigen::Index;

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back(complex_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

// NaN and infinities have no JSON literal; they become null.
json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  out.close();
  if (!out) throw Error("failed writing " + path.string());
}

}  // namespace

json summary_json(const RunSummary& s) {
  json j;
  j["experiment"] = s.experiment;
  j["seed"] = s.seed;
  j["n_events"] = s.n_events;
  j["fingerprint"] = s.fingerprint;
  j["frequencies"] = s.frequencies;
  j["born_weights"] = s.born_weights;

  json phases = json::array();
  for (const auto& p : s.branch_phases) phases.push_back(complex_json(p));
  j["branch_phases"] = phases;

  json interference = json::object();
  for (const auto& [k, v] : s.interference) interference[k] = number(v);
  j["interference"] = interference;
  j["times"] = s.times;

  json restricted = json::object();
  for (const auto& [k, m] : s.restricted_states) restricted[k] = matrix_json(m);
  j["restricted_states"] = restricted;

  json corr = json::object();
  for (const auto& [k, v] : s.correlations) corr[k] = number(v);
  j["correlations"] = corr;

  if (s.decoherence) {
    const auto& d = *s.decoherence;
    json simulated = json::array();
    for (const auto& z : d.simulated) simulated.push_back(complex_json(z));
    j["decoherence"] = {{"times", d.times},
                        {"offdiag_factor", simulated},
                        {"offdiag_closed_form", d.closed_form},
                        {"interference", d.interference},
                        {"interference_expected", d.interference_expected}};
  }
  j["couplings"] = s.couplings;
  if (s.timing) {
    j["perception_time"] = {{"times", s.timing->times},
                            {"pdf", s.timing->pdf},
                            {"cdf", s.timing->cdf},
                            {"normalization", s.timing->normalization}};
  }

  j["density_checks"] = s.density_checks;
  json checks = json::array();
  for (const auto& c : s.checks) {
    checks.push_back({{"name", c.name},
                      {"passed", c.passed},
                      {"hard", c.hard},
                      {"measured", number(c.measured)},
                      {"expected", number(c.expected)},
                      {"tolerance", number(c.tolerance)}});
  }
  j["checks"] = checks;
  j["passed"] = s.passed();
  j["warnings"] = s.warnings;

  const auto& t = s.tolerances;
  j["tolerances"] = {{"algebraic", t.algebraic},
                     {"round_trip", t.round_trip},
                     {"full_round_trip", t.full_round_trip},
                     {"ready_state", t.ready_state},
                     {"amplitude_norm", t.amplitude_norm},
                     {"distinguishability", t.distinguishability},
                     {"positivity", t.positivity},
                     {"transition", t.transition}};
  return j;
}

json records_json(const std::vector<EventRecord>& records) {
  json out = json::array();
  for (const auto& r : records) {
    json perceptions = json::array();
    for (const auto& p : r.perceptions) {
      perceptions.push_back(
          {{"t", p.t}, {"observer", p.observer}, {"j", p.j}, {"flags", p.flags}});
    }
    json derived = json::object();
    for (const auto& [k, v] : r.derived) derived[k] = number(v);
    out.push_back({{"event_id", r.event_id},
                   {"perceptions", perceptions},
                   {"flags", r.flags},
                   {"derived", derived}});
  }
  return out;
}

std::string records_csv(const std::vector<EventRecord>& records) {
  std::string out = "event_id,t_perceive,j,flags\n";
  for (const auto& r : records) {
    for (const auto& p : r.perceptions) {
      std::string flags = "obs=" + p.observer;
      for (const auto& f : p.flags) flags += "|" + f;
      for (const auto& f : r.flags) flags += "|" + f;
      out += std::to_string(r.event_id) + ',' + format_double(p.t) + ',' + std::to_string(p.j) +
             ',' + flags + '\n';
    }
  }
  return out;
}

EmittedFiles emit(const RunSummary& summary, const std::vector<EventRecord>& records,
                  OutputFormat format, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("cannot create output directory " + dir.string() + ": " + ec.message());

  EmittedFiles files{dir / "summary.json", {}};
  write_file(files.summary, summary_json(summary).dump(2) + "\n");
  if (format == OutputFormat::kCsv) {
    files.events = dir / "events.csv";
    write_file(files.events, records_csv(records));
  } else {
    files.events = dir / "events.json";
    write_file(files.events, records_json(records).dump(2) + "\n");
  }
  return files;
}

}  // namespace dualsim
