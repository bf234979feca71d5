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

#include "dualsim/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "dualsim/emit.hpp"
#include "dualsim/interference.hpp"
#include "dualsim/rng.hpp"
#include "dualsim/runner.hpp"
#include "dualsim/selfdescription.hpp"

namespace dualsim {

namespace {

using Index = Eigen::Index;

Scenario base_scenario(Experiment e, std::uint64_t seed, std::size_t events, Vector amps) {
  Scenario sc;
  sc.experiment = e;
  sc.seed = seed;
  sc.n_events = events;
  sc.s_dim = static_cast<std::size_t>(amps.size());
  sc.o_dim = sc.s_dim + 1;
  sc.amplitudes = std::move(amps);
  sc.lambda = std::numbers::pi / (2.0 * sc.delta_t);
  validate_scenario(sc);
  return sc;
}

Vector amps2(double a1, double a2) {
  Vector v(2);
  v << a1, a2;
  return v;
}

Vector symmetric() { return amps2(1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)); }

std::string num(double v) {
  std::ostringstream out;
  out.precision(6);
  out << v;
  return out.str();
}

// Hard check by name; appends its measured value to `detail`.
bool check_ok(const RunSummary& s, const std::string& name, std::ostringstream& detail) {
  const auto* c = s.find_check(name);
  if (!c) {
    detail << name << "=missing ";
    return false;
  }
  detail << name << "=" << num(c->measured) << " ";
  return c->passed;
}

CriterionResult born_statistics(const AcceptanceOptions& opt) {
  const auto sc = base_scenario(Experiment::kPremeasure, opt.seed, 100000,
                                amps2(std::sqrt(0.3), std::sqrt(0.7)));
  const auto start = std::chrono::steady_clock::now();
  const auto res = run(sc);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const double f1 = res.summary.frequencies.at("O")[0];
  std::ostringstream d;
  d << "f(j=1)=" << num(f1) << " in [0.29, 0.31], runtime " << num(secs) << " s < 10 s";
  return {1, "born statistics", f1 >= 0.29 && f1 <= 0.31 && secs < 10.0, d.str()};
}

CriterionResult interference_discrimination(const AcceptanceOptions&) {
  const auto model = MeasurementModel::calibrated(2, 3);
  const auto psi = system_state(symmetric());
  const auto pure = DensityMatrix::from_pure(run_premeasurement(psi, model).state);
  const auto mixed = pointer_mixture(psi, model);
  const auto b = interference_operator(pure.layout());
  const double bp = discriminate(pure, b);
  const double bm = discriminate(mixed, b);
  std::ostringstream d;
  d.precision(17);
  d << "pure B=" << bp << ", mixed B=" << bm;
  return {2, "interference discrimination",
          std::abs(bp - 1.0) <= 1e-12 && std::abs(bm) <= 1e-12, d.str()};
}

CriterionResult breuer_indistinguishability(const AcceptanceOptions& opt) {
  CounterRng rng(opt.seed, Stream::kTest, 3);
  double worst_same = 0.0;
  double worst_margin = std::numeric_limits<double>::infinity();
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t s_dim = 2 + static_cast<std::size_t>(trial % 3);
    Vector a(static_cast<Index>(s_dim));
    for (Index k = 0; k < a.size(); ++k) a[k] = Complex(rng.uniform() - 0.5, rng.uniform() - 0.5);
    a.normalize();
    const auto model = MeasurementModel::calibrated(s_dim, s_dim + 1);
    const auto psi = system_state(a);
    const auto pure = restricted_state(DensityMatrix::from_pure(run_premeasurement(psi, model).state),
                                       SourceKind::kPureEnsemble);
    const auto mixed = restricted_state(pointer_mixture(psi, model), SourceKind::kMixedEnsemble);
    worst_same = std::max(worst_same, breuer_distinguishable(pure, mixed).distance);

    double bound = 1.0;
    for (Index k = 0; k < a.size(); ++k) bound = std::min(bound, 1.0 - std::norm(a[k]));
    for (std::size_t b = 1; b <= s_dim; ++b) {
      const auto single = individual_restriction(model.o_dim, pointer_index(b));
      const double dist = breuer_distinguishable(single, pure).distance;
      worst_margin = std::min(worst_margin, dist - (bound - 1e-9));
    }
  }
  std::ostringstream d;
  d << "max pure/mixed distance " << num(worst_same)
    << ", min individual-event margin " << num(worst_margin);
  return {3, "breuer indistinguishability", worst_same <= 1e-12 && worst_margin >= 0.0, d.str()};
}

CriterionResult undo_reversibility(const AcceptanceOptions& opt) {
  const auto res = run(base_scenario(Experiment::kUndo, opt.seed, 10000, symmetric()));
  const auto& s = res.summary;
  std::ostringstream d;
  bool ok = check_ok(s, "undo_restores_initial", d);
  const double dual = s.correlations.at("dual_undo");
  const double base = s.correlations.at("baseline_undo");
  d << "dual corr=" << num(dual) << " baseline corr=" << base;
  ok = ok && std::abs(dual) <= 0.02 && base == 1.0;
  return {4, "undo reversibility", ok, d.str()};
}

CriterionResult decoherence_law(const AcceptanceOptions& opt) {
  auto sc = base_scenario(Experiment::kDecohere, opt.seed, 100, symmetric());
  sc.environment->n_atoms = 8;
  sc.environment->time_points = 50;
  const auto res = run(sc);
  std::ostringstream d;
  bool ok = check_ok(res.summary, "offdiag_factor_closed_form", d);
  ok = check_ok(res.summary, "interference_damping", d) && ok;
  ok = ok && res.summary.decoherence && res.summary.decoherence->times.size() == 50;
  return {5, "decoherence law", ok, d.str()};
}

CriterionResult perception_pdf(const AcceptanceOptions& opt) {
  auto sc = base_scenario(Experiment::kPerceptionTiming, opt.seed, 1000, symmetric());
  sc.perception_mode = PerceptionMode::kSampled;
  const auto res = run(sc);
  std::ostringstream d;
  bool ok = check_ok(res.summary, "perception_pdf_normalized", d);
  ok = check_ok(res.summary, "perception_pdf_closed_form", d) && ok;
  return {6, "perception-time pdf", ok, d.str()};
}

CriterionResult two_observer_agreement(const AcceptanceOptions& opt) {
  const double a1 = std::sqrt(0.3), a2 = std::sqrt(0.7);
  const auto res = run(base_scenario(Experiment::kTwoObserver, opt.seed, 10000, amps2(a1, a2)));
  std::ostringstream d;
  bool ok = check_ok(res.summary, "observers_agree", d);
  const double b_mid = res.summary.interference.at("t_mid");
  d << "B(t1<t<t2)=" << num(b_mid) << " >= " << num(2.0 * a1 * a2);
  ok = ok && b_mid >= 2.0 * a1 * a2 - 1e-10;
  return {7, "two-observer agreement", ok, d.str()};
}

CriterionResult conservation(const AcceptanceOptions& opt) {
  std::size_t checked = 0;
  bool ok = true;
  std::ostringstream d;
  for (auto e : {Experiment::kPremeasure, Experiment::kUndo, Experiment::kTwoObserver,
                 Experiment::kDecohere, Experiment::kReductionCompare,
                 Experiment::kPerceptionTiming}) {
    auto sc = base_scenario(e, opt.seed, 200, amps2(std::sqrt(0.3), std::sqrt(0.7)));
    const auto res = run(sc);  // throws InvariantBreach on any invalid state
    checked += res.summary.density_checks;
    const auto* purity = res.summary.find_check("purity_conserved");
    if (!purity || !purity->passed) {
      ok = false;
      d << to_string(e) << ": purity drift ";
    }
  }
  for (std::size_t b = 0; b < 3; ++b) {
    Vector a = Vector::Zero(3);
    a[static_cast<Index>(b)] = 1.0;
    const auto res = run(base_scenario(Experiment::kPremeasure, opt.seed, 500, a));
    const auto* det = res.summary.find_check("eigenstate_deterministic:O");
    if (!det || !det->passed) {
      ok = false;
      d << "eigenstate " << b + 1 << " not deterministic ";
    }
  }
  d << checked << " density matrices validated; purity conserved in every scenario; "
    << "eigenstate inputs deterministic";
  return {8, "conservation suite", ok, d.str()};
}

CriterionResult no_jump(const AcceptanceOptions& opt) {
  auto sc = base_scenario(Experiment::kPremeasure, opt.seed, 1000,
                          amps2(std::sqrt(0.3), std::sqrt(0.7)));
  sc.hold_steps = 100;
  const auto res = run(sc);
  std::ostringstream d;
  bool ok = check_ok(res.summary, "no_jump_phi_i_changes", d);
  ok = check_ok(res.summary, "no_jump_reperceptions", d) && ok;
  d << "over 100 steps x 1000 events";
  return {9, "no-jump rule", ok, d.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

CriterionResult determinism(const AcceptanceOptions& opt) {
  bool ok = true;
  std::size_t compared = 0;
  for (auto [e, fmt] : {std::pair{Experiment::kUndo, OutputFormat::kCsv},
                        std::pair{Experiment::kTwoObserver, OutputFormat::kJson},
                        std::pair{Experiment::kDecohere, OutputFormat::kJson}}) {
    auto sc = base_scenario(e, opt.seed, 500, amps2(std::sqrt(0.3), std::sqrt(0.7)));
    sc.perception_mode = PerceptionMode::kSampled;
    const auto name = std::string(to_string(e));
    std::vector<EmittedFiles> files;
    for (int pass = 0; pass < 2; ++pass) {
      const auto res = run(sc);
      files.push_back(emit(res.summary, res.records, fmt,
                           opt.work_dir / name / ("run" + std::to_string(pass))));
    }
    ok = ok && slurp(files[0].summary) == slurp(files[1].summary) &&
         slurp(files[0].events) == slurp(files[1].events);
    compared += 2;
  }
  std::ostringstream d;
  d << compared << " file pairs compared byte for byte";
  return {10, "determinism", ok, d.str()};
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options) {
  const std::vector<std::pair<int, std::function<CriterionResult(const AcceptanceOptions&)>>>
      criteria = {{1, born_statistics},      {2, interference_discrimination},
                  {3, breuer_indistinguishability}, {4, undo_reversibility},
                  {5, decoherence_law},      {6, perception_pdf},
                  {7, two_observer_agreement}, {8, conservation},
                  {9, no_jump},              {10, determinism}};
  std::vector<CriterionResult> out;
  for (const auto& [id, fn] : criteria) {
    try {
      out.push_back(fn(options));
    } catch (const std::exception& e) {
      out.push_back({id, "criterion " + std::to_string(id), false,
                     std::string("exception: ") + e.what()});
    }
  }
  return out;
}

std::string format_result(const CriterionResult& r) {
  std::ostringstream out;
  out << (r.passed ? "PASS" : "FAIL") << ' ' << (r.id < 10 ? " " : "") << r.id << ' ' << r.name
      << ": " << r.detail;
  return out.str();
}

}  // namespace dualsim
