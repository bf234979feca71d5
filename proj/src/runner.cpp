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

#include "dualsim/runner.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numeric>
#include <sstream>

#include "dualsim/errors.hpp"
#include "dualsim/interference.hpp"
#include "dualsim/selfdescription.hpp"
#include "dualsim/version.hpp"

namespace dualsim {

namespace {

using Index = Eigen::Index;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kStatSigmas = 4.0;
constexpr double kUndoCorrelationBound = 0.02;

struct Context {
  const Scenario& sc;
  RunOptions options;
  MeasurementModel model;
  StateVector psi_s;
  std::vector<double> born;
  std::optional<PerceptionTimeTable> timing;
};

// Per-event output that feeds the summary; stored by event id and reduced in
// id order after the loop so the result does not depend on scheduling.
struct EventTally {
  std::size_t validations = 0;
  std::vector<std::size_t> picks;  // one slot per record source
  double distance = 0.0;
  bool flagged = false;
};

template <typename Fn>
void for_each_event(std::size_t n, bool parallel, Fn&& fn) {
  std::vector<std::exception_ptr> errors(n);
  const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 64) if (parallel)
  for (long long i = 0; i < count; ++i) {
    try {
      fn(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

void check_cap(std::size_t dim, const Scenario& sc) {
  if (dim > sc.max_dim) {
    throw DimensionCapExceeded("composite dimension " + std::to_string(dim) +
                               " exceeds the configured cap " + std::to_string(sc.max_dim));
  }
}

std::size_t validated(const DensityMatrix& rho, const char* context) {
  rho.validate(context);
  return 1;
}

void require_complete(const DensityMatrix& rho, std::string_view observer) {
  const double ready = subsystem_weights(rho, observer)[0];
  if (ready > kTol.ready_state) {
    std::ostringstream msg;
    msg << "lambda * delta_t leaves weight " << ready << " on the ready state of '" << observer
        << "'; the measurement is incomplete";
    throw ScenarioError("measurement.lambda", 0, msg.str());
  }
}

void add_check(RunSummary& s, std::string name, double measured, double expected, double tol,
               bool hard = true) {
  const bool ok = std::abs(measured - expected) <= tol;
  s.checks.push_back({std::move(name), ok, measured, expected, tol, hard});
}

std::vector<double> frequencies(const std::vector<EventTally>& tallies, std::size_t slot,
                                std::size_t s_dim) {
  std::vector<std::size_t> counts(s_dim, 0);
  for (const auto& t : tallies) {
    const std::size_t j = t.picks.at(slot);
    if (j >= 1 && j <= s_dim) ++counts[j - 1];
  }
  std::vector<double> out(s_dim);
  for (std::size_t b = 0; b < s_dim; ++b) {
    out[b] = static_cast<double>(counts[b]) / static_cast<double>(tallies.size());
  }
  return out;
}

std::vector<std::size_t> picks(const std::vector<EventTally>& tallies, std::size_t slot) {
  std::vector<std::size_t> out;
  out.reserve(tallies.size());
  for (const auto& t : tallies) out.push_back(t.picks.at(slot));
  return out;
}

// Largest deviation of empirical frequencies from Born weights in standard
// errors. Infinite when a zero- or one-weight branch is violated.
double born_z(const std::vector<double>& freq, const std::vector<double>& born, std::size_t n) {
  double worst = 0.0;
  for (std::size_t b = 0; b < born.size(); ++b) {
    const double p = born[b];
    const double var = p * (1.0 - p) / static_cast<double>(n);
    const double dev = std::abs(freq[b] - p);
    if (var <= 1e-300) {
      if (dev > kTol.algebraic) worst = std::numeric_limits<double>::infinity();
      continue;
    }
    worst = std::max(worst, dev / std::sqrt(var));
  }
  return worst;
}

void report_frequencies(RunSummary& s, const Context& ctx, const std::string& key,
                        const std::vector<double>& freq) {
  s.frequencies[key] = freq;
  const double sum = std::accumulate(freq.begin(), freq.end(), 0.0);
  add_check(s, "frequencies_sum:" + key, sum, 1.0, 1.0 / static_cast<double>(ctx.sc.n_events));
  add_check(s, "born_frequencies:" + key, born_z(freq, ctx.born, ctx.sc.n_events), 0.0,
            kStatSigmas, false);
}

void report_eigenstate(RunSummary& s, const Context& ctx, const std::vector<EventTally>& tallies,
                       std::size_t slot, const std::string& key) {
  const auto top = std::max_element(ctx.born.begin(), ctx.born.end());
  if (*top < 1.0 - kTol.algebraic) return;
  const std::size_t branch = static_cast<std::size_t>(top - ctx.born.begin()) + 1;
  double misses = 0.0;
  for (const auto& t : tallies) misses += t.picks.at(slot) != pointer_index(branch) ? 1.0 : 0.0;
  add_check(s, "eigenstate_deterministic:" + key, misses, 0.0, 0.0);
}

// Expected B̄ on the premeasured state from the amplitudes and the branch
// phases H_I attaches: 2 Re(c_1* c_2) with c_b = a_b · phase_b.
double expected_interference(const Context& ctx, const std::vector<Complex>& phases) {
  const Complex c1 = ctx.psi_s[0] * phases[0];
  const Complex c2 = ctx.psi_s[1] * phases[1];
  return 2.0 * (std::conj(c1) * c2).real();
}

// Static report on the premeasured state ρ1 versus its matched mixture.
void report_measurement(RunSummary& s, const Context& ctx, const DensityMatrix& rho0,
                        const DensityMatrix& rho1) {
  const auto pre = run_premeasurement(ctx.psi_s, ctx.model);
  s.branch_phases = pre.branch_phases;

  const auto pure = restricted_state(rho1, SourceKind::kPureEnsemble);
  const DensityMatrix mixture = pointer_mixture(ctx.psi_s, ctx.model);
  s.density_checks += validated(mixture, "pointer mixture");
  const auto mixed = restricted_state(mixture, SourceKind::kMixedEnsemble);
  s.restricted_states["O:pure_ensemble"] = pure.o_density.entries();
  s.restricted_states["O:mixed_ensemble"] = mixed.o_density.entries();

  const auto weights = pointer_weights(pure);
  double worst = 0.0;
  for (std::size_t b = 1; b <= ctx.model.s_dim; ++b) {
    worst = std::max(worst, std::abs(weights[pointer_index(b)] - ctx.born[b - 1]));
  }
  add_check(s, "born_weights", worst, 0.0, kTol.algebraic);

  const auto b_pure_layout = interference_operator(rho1.layout());
  const auto b_mixed_layout = interference_operator(mixture.layout());
  const double b_pure = discriminate(rho1, b_pure_layout);
  const double b_mixed = discriminate(mixture, b_mixed_layout);
  s.interference["pure_ensemble"] = b_pure;
  s.interference["mixed_ensemble"] = b_mixed;
  if (ctx.model.s_dim > 2) {
    s.interference["coherence_score:pure_ensemble"] = coherence_score(rho1, ctx.model.s_dim);
    s.interference["coherence_score:mixed_ensemble"] = coherence_score(mixture, ctx.model.s_dim);
  }
  add_check(s, "interference_pure", b_pure, expected_interference(ctx, pre.branch_phases),
            kTol.round_trip);
  add_check(s, "interference_mixed", b_mixed, 0.0, kTol.algebraic);
  add_check(s, "breuer_pure_vs_mixed", trace_distance(pure.o_density, mixed.o_density), 0.0,
            kTol.algebraic);
  add_check(s, "purity_conserved", rho1.purity() - rho0.purity(), 0.0, kTol.round_trip);
}

PerceptionEntry perceive_entry(DualEventState& ev, CounterRng& rng, const Context& ctx,
                               double window_start,
                               std::span<const PerceptionRecord> held = {}) {
  ev = perceive(ev, rng, held);
  PerceptionEntry entry{ev.clock, ev.observer, ev.phi_i, {"dual"}};
  if (ctx.sc.perception_mode == PerceptionMode::kSampled) {
    entry.t = window_start + sample_perception_time(*ctx.timing, rng.uniform());
    entry.flags.push_back("sampled_time");
  }
  return entry;
}

struct MeasurementSetup {
  CompositeLayout layout;
  LinearOperator h;
  Propagator prop;
  DensityMatrix rho0;
  DensityMatrix rho1;
};

MeasurementSetup setup_measurement(const Context& ctx, RunSummary& s) {
  check_cap(ctx.model.s_dim * ctx.model.o_dim, ctx.sc);
  CompositeLayout layout = measurement_layout(ctx.model);
  LinearOperator h = build_meas_hamiltonian(ctx.model, layout);
  Propagator prop(h);
  DensityMatrix rho0 = DensityMatrix::from_pure(ready_state(ctx.psi_s, ctx.model));
  s.density_checks += validated(rho0, "initial state");
  DensityMatrix rho1 = prop.apply(rho0, ctx.model.duration);
  s.density_checks += validated(rho1, "premeasured state");
  require_complete(rho1, kObserver);
  return {std::move(layout), std::move(h), std::move(prop), std::move(rho0), std::move(rho1)};
}

// ---------------------------------------------------------------------------

void run_premeasure(const Context& ctx, RunResult& out) {
  auto& s = out.summary;
  const auto m = setup_measurement(ctx, s);
  report_measurement(s, ctx, m.rho0, m.rho1);

  // Branch-preserving evolution after perception: Q on S plus the pointer
  // observable on O, both diagonal in the branch basis.
  std::vector<double> q_s(ctx.model.s_dim);
  for (std::size_t b = 0; b < q_s.size(); ++b) q_s[b] = static_cast<double>(b + 1);
  const LinearOperator h_hold =
      system_observable(m.layout, q_s) +
      diagonal_observable(m.layout, kObserver, default_pointer_values(ctx.model.o_dim));

  const auto b_op = interference_operator(m.layout);
  const double dt = ctx.model.duration;
  std::vector<EventTally> tallies(ctx.sc.n_events);
  for_each_event(ctx.sc.n_events, ctx.options.parallel, [&](std::size_t id) {
    auto& tally = tallies[id];
    auto& rec = out.records[id];
    rec.event_id = id;
    CounterRng rng(ctx.sc.seed, Stream::kEvents, id);
    auto ev = evolve_dynamical(init_dual(m.rho0, id), m.prop, dt);
    tally.validations += validated(ev.phi_d, "event state");
    const double before = discriminate(ev.phi_d, b_op);
    rec.perceptions.push_back(perceive_entry(ev, rng, ctx, 0.0));
    if (discriminate(ev.phi_d, b_op) != before) {
      throw InvariantBreach("perceive changed the interference expectation");
    }
    tally.picks.push_back(ev.phi_i);

    std::size_t changes = 0;
    for (std::size_t step = 0; step < ctx.sc.hold_steps; ++step) {
      const std::size_t held = ev.phi_i;
      auto next = evolve_event(ev, h_hold, ctx.sc.hold_step, rng);
      ev = std::move(next.event);
      tally.validations += validated(ev.phi_d, "held event state");
      if (next.reperceived) {
        tally.flagged = true;
        rec.perceptions.push_back({ev.clock, ev.observer, ev.phi_i, {"dual", "reperceived"}});
      }
      if (ev.phi_i != held) ++changes;
    }
    if (ctx.sc.hold_steps) {
      rec.derived["phi_i_changes"] = static_cast<double>(changes);
      tally.distance = static_cast<double>(changes);
    }
    if (tally.flagged) rec.flags.push_back("reperceived");
  });

  for (const auto& t : tallies) s.density_checks += t.validations;
  report_frequencies(s, ctx, "O", frequencies(tallies, 0, ctx.model.s_dim));
  report_eigenstate(s, ctx, tallies, 0, "O");
  if (ctx.sc.hold_steps) {
    double changes = 0.0, reperceived = 0.0;
    for (const auto& t : tallies) {
      changes += t.distance;
      reperceived += t.flagged ? 1.0 : 0.0;
    }
    add_check(s, "no_jump_phi_i_changes", changes, 0.0, 0.0);
    add_check(s, "no_jump_reperceptions", reperceived, 0.0, 0.0);
  }
}

// Dual undo/remeasure events paired with reduction-baseline events on the
// same event ids. Slots: 0 old dual, 1 new dual, 2 old baseline, 3 new
// baseline.
void run_undo_events(const Context& ctx, const MeasurementSetup& m, RunResult& out,
                     bool with_interference) {
  auto& s = out.summary;
  const double dt = ctx.model.duration;
  const auto b_op = interference_operator(m.layout);
  std::vector<EventTally> tallies(ctx.sc.n_events);
  for_each_event(ctx.sc.n_events, ctx.options.parallel, [&](std::size_t id) {
    auto& tally = tallies[id];
    auto& rec = out.records[id];
    rec.event_id = id;
    rec.flags.push_back("undo");
    CounterRng rng(ctx.sc.seed, Stream::kEvents, id);
    auto ev = evolve_dynamical(init_dual(m.rho0, id), m.prop, dt);
    tally.validations += validated(ev.phi_d, "event state");
    auto first = perceive_entry(ev, rng, ctx, 0.0);
    if (with_interference) rec.derived["interference_dual"] = discriminate(ev.phi_d, b_op);

    auto undone = undo_dual(ev, ctx.model);
    tally.validations += validated(undone.phi_d, "undone state");
    tally.distance = trace_distance(undone.phi_d, m.rho0);
    tally.flagged = undone.phi_i != 0;
    rec.derived["undo_trace_distance"] = tally.distance;

    auto again = evolve_dynamical(undone, m.prop, dt);
    tally.validations += validated(again.phi_d, "re-measured state");
    auto second = perceive_entry(again, rng, ctx, undone.clock);
    second.flags.push_back("after_undo");

    CounterRng brng(ctx.sc.seed, Stream::kBaseline, id);
    const auto base = reduction_baseline(ctx.psi_s, brng);
    const auto base_undone = baseline_undo(base, ctx.model);
    const std::size_t b_new = baseline_remeasure(base_undone, ctx.model, brng);
    if (with_interference) rec.derived["interference_baseline"] = 0.0;

    tally.picks = {first.j, second.j, pointer_index(base.branch), pointer_index(b_new)};
    rec.perceptions.push_back(std::move(first));
    rec.perceptions.push_back({dt, std::string(kObserver), pointer_index(base.branch), {"baseline"}});
    rec.perceptions.push_back(std::move(second));
    rec.perceptions.push_back(
        {3.0 * dt, std::string(kObserver), pointer_index(b_new), {"baseline", "after_undo"}});
  });

  double worst = 0.0, not_erased = 0.0, persisted = 0.0;
  for (const auto& t : tallies) {
    s.density_checks += t.validations;
    worst = std::max(worst, t.distance);
    not_erased += t.flagged ? 1.0 : 0.0;
    persisted += t.picks[2] == t.picks[3] ? 1.0 : 0.0;
  }
  const double n = static_cast<double>(ctx.sc.n_events);
  add_check(s, "undo_restores_initial", worst, 0.0, kTol.round_trip);
  add_check(s, "undo_erases_record", not_erased, 0.0, 0.0);

  const double dual_corr = index_correlation(picks(tallies, 0), picks(tallies, 1));
  const double base_corr = index_correlation(picks(tallies, 2), picks(tallies, 3));
  s.correlations["dual_undo"] = dual_corr;
  s.correlations["baseline_undo"] = base_corr;
  s.checks.push_back({"dual_undo_correlation",
                      std::isnan(dual_corr) || std::abs(dual_corr) <= kUndoCorrelationBound,
                      dual_corr, 0.0, kUndoCorrelationBound, false});
  add_check(s, "baseline_outcome_persistence", persisted / n, 1.0, 0.0);

  report_frequencies(s, ctx, "O", frequencies(tallies, 0, ctx.model.s_dim));
  report_frequencies(s, ctx, "O:after_undo", frequencies(tallies, 1, ctx.model.s_dim));
  report_frequencies(s, ctx, "baseline", frequencies(tallies, 2, ctx.model.s_dim));
  report_frequencies(s, ctx, "baseline:after_undo", frequencies(tallies, 3, ctx.model.s_dim));
  report_eigenstate(s, ctx, tallies, 0, "O");

  const DensityMatrix undone = reverse_evolution(m.rho1, m.h, dt);
  s.density_checks += validated(undone, "undone ensemble");
  s.restricted_states["O:after_undo"] =
      restricted_state(undone, SourceKind::kPureEnsemble).o_density.entries();
}

void run_undo(const Context& ctx, RunResult& out) {
  const auto m = setup_measurement(ctx, out.summary);
  report_measurement(out.summary, ctx, m.rho0, m.rho1);
  run_undo_events(ctx, m, out, false);
}

void run_reduction_compare(const Context& ctx, RunResult& out) {
  auto& s = out.summary;
  const auto m = setup_measurement(ctx, s);
  report_measurement(s, ctx, m.rho0, m.rho1);
  run_undo_events(ctx, m, out, true);

  // Individual baseline events: each collapsed |s_b O_b⟩ carries no
  // interference term; O cannot tell which source it came from.
  double worst_b = 0.0;
  for (std::size_t b = 1; b <= ctx.model.s_dim; ++b) {
    const auto single = individual_event_state(ctx.model, b);
    worst_b = std::max(worst_b, std::abs(discriminate(single, interference_operator(single.layout()))));
    s.restricted_states["O:baseline_event_" + std::to_string(b)] =
        restricted_state(single, SourceKind::kIndividualEvent).o_density.entries();
  }
  s.interference["dual"] = s.interference["pure_ensemble"];
  s.interference["baseline"] = s.interference["mixed_ensemble"];
  s.interference["baseline_individual_max"] = worst_b;
  add_check(s, "baseline_individual_interference", worst_b, 0.0, kTol.algebraic);
}

void run_two_observer(const Context& ctx, RunResult& out) {
  auto& s = out.summary;
  const auto& model = ctx.model;
  check_cap(model.s_dim * model.o_dim * model.o_dim, ctx.sc);
  const CompositeLayout layout({{std::string(kSystem), model.s_dim},
                                {std::string(kObserver), model.o_dim},
                                {std::string(kSecondObserver), model.o_dim}},
                               ctx.sc.max_dim);
  const Propagator prop_o(build_meas_hamiltonian(model, layout, kSystem, kObserver));
  const Propagator prop_o2(build_meas_hamiltonian(model, layout, kSystem, kSecondObserver));

  Vector ready = Vector::Zero(static_cast<Index>(model.o_dim));
  ready[0] = 1.0;
  const StateVector o_ready(CompositeLayout({{std::string(kObserver), model.o_dim}}), ready);
  const StateVector o2_ready(CompositeLayout({{std::string(kSecondObserver), model.o_dim}}), ready);
  const std::vector<StateVector> parts{ctx.psi_s, o_ready, o2_ready};
  const DensityMatrix rho0 = DensityMatrix::from_pure(tensor_compose(parts));
  s.density_checks += validated(rho0, "initial state");

  // O measures in [0, Δt]; O′ measures in [2Δt, 3Δt]; t_1 = Δt, t_2 = 3Δt.
  const double dt = model.duration;
  const double t1 = dt, t_mid = 1.5 * dt, t2 = 3.0 * dt;
  const DensityMatrix rho1 = prop_o.apply(rho0, dt);
  s.density_checks += validated(rho1, "state after O");
  require_complete(rho1, kObserver);
  const DensityMatrix rho2 = prop_o2.apply(rho1, dt);
  s.density_checks += validated(rho2, "state after O'");
  require_complete(rho2, kSecondObserver);

  const auto pre = run_premeasurement(ctx.psi_s, model);
  s.branch_phases = pre.branch_phases;
  const auto b_op = interference_operator(layout);
  const double b_mid = discriminate(rho1, b_op);
  const double b_after = discriminate(rho2, b_op);
  s.interference["t_mid"] = b_mid;
  s.interference["after_second_observer"] = b_after;
  s.times["t1"] = t1;
  s.times["t_mid"] = t_mid;
  s.times["t2"] = t2;
  add_check(s, "interference_between_observations", b_mid,
            expected_interference(ctx, pre.branch_phases), kTol.round_trip);
  add_check(s, "interference_after_second_observer", b_after, 0.0, kTol.algebraic);
  add_check(s, "purity_conserved", rho2.purity() - rho0.purity(), 0.0, kTol.round_trip);

  const auto r_o = restricted_state(rho1, SourceKind::kPureEnsemble, kObserver);
  const auto r_o2_mid = restricted_state(rho1, SourceKind::kPureEnsemble, kSecondObserver);
  const auto r_o2 = restricted_state(rho2, SourceKind::kPureEnsemble, kSecondObserver);
  s.restricted_states["O:t1"] = r_o.o_density.entries();
  s.restricted_states["O':t_mid"] = r_o2_mid.o_density.entries();
  s.restricted_states["O':t2"] = r_o2.o_density.entries();
  add_check(s, "second_observer_ready_at_t_mid", pointer_weights(r_o2_mid)[0], 1.0,
            kTol.ready_state);
  double worst = 0.0;
  const auto w_o = pointer_weights(r_o);
  const auto w_o2 = pointer_weights(r_o2);
  for (std::size_t b = 1; b <= model.s_dim; ++b) {
    worst = std::max({worst, std::abs(w_o[pointer_index(b)] - ctx.born[b - 1]),
                      std::abs(w_o2[pointer_index(b)] - ctx.born[b - 1])});
  }
  add_check(s, "born_weights", worst, 0.0, kTol.algebraic);

  std::vector<EventTally> tallies(ctx.sc.n_events);
  for_each_event(ctx.sc.n_events, ctx.options.parallel, [&](std::size_t id) {
    auto& tally = tallies[id];
    auto& rec = out.records[id];
    rec.event_id = id;
    CounterRng rng(ctx.sc.seed, Stream::kEvents, id);
    auto ev = evolve_dynamical(init_dual(rho0, id, kObserver), prop_o, dt);
    tally.validations += validated(ev.phi_d, "event state after O");
    auto first = perceive_entry(ev, rng, ctx, 0.0);

    // O′ is still ready at t_1; its own record starts then. Nothing acts on
    // S⊗O⊗O′ between the two windows.
    auto ev2 = init_dual(ev.phi_d, id, kSecondObserver);
    ev2.clock = 2.0 * dt;
    ev2 = evolve_dynamical(ev2, prop_o2, dt);
    tally.validations += validated(ev2.phi_d, "event state after O'");
    const PerceptionRecord held[] = {{std::string(kObserver), ev.phi_i}};
    auto second = perceive_entry(ev2, rng, ctx, 2.0 * dt, held);

    tally.picks = {first.j, second.j};
    tally.flagged = first.j != second.j;
    if (tally.flagged) rec.flags.push_back("disagreement");
    rec.perceptions.push_back(std::move(first));
    rec.perceptions.push_back(std::move(second));
  });

  double disagreements = 0.0;
  for (const auto& t : tallies) {
    s.density_checks += t.validations;
    disagreements += t.flagged ? 1.0 : 0.0;
  }
  add_check(s, "observers_agree", disagreements, 0.0, 0.0);
  s.correlations["O_vs_O'"] = index_correlation(picks(tallies, 0), picks(tallies, 1));
  report_frequencies(s, ctx, "O", frequencies(tallies, 0, model.s_dim));
  report_frequencies(s, ctx, "O'", frequencies(tallies, 1, model.s_dim));
  report_eigenstate(s, ctx, tallies, 0, "O");
}

void run_decohere(const Context& ctx, RunResult& out) {
  auto& s = out.summary;
  const auto& model = ctx.model;
  const auto& cfg = *ctx.sc.environment;
  check_cap(model.s_dim * model.o_dim * (std::size_t{1} << std::min<std::size_t>(cfg.n_atoms, 62)),
            ctx.sc);

  CounterRng crng(ctx.sc.seed, Stream::kCouplings, 0);
  EnvironmentModel env{{}, cfg.pointer_values};
  for (std::size_t k = 0; k < cfg.n_atoms; ++k) {
    env.couplings.push_back(cfg.coupling_min + (cfg.coupling_max - cfg.coupling_min) * crng.uniform());
  }
  env.validate(model.s_dim, model.o_dim);
  s.couplings = env.couplings;

  // Premeasurement on S⊗O (checked on the small space), then the environment
  // joins in |+⟩^n and H_OE runs.
  check_cap(model.s_dim * model.o_dim, ctx.sc);
  const CompositeLayout so_layout = measurement_layout(model);
  const DensityMatrix rho0_so = DensityMatrix::from_pure(ready_state(ctx.psi_s, model));
  const DensityMatrix rho1_so =
      Propagator(build_meas_hamiltonian(model, so_layout)).apply(rho0_so, model.duration);
  s.density_checks += validated(rho0_so, "initial state") + validated(rho1_so, "premeasured state");
  require_complete(rho1_so, kObserver);
  report_measurement(s, ctx, rho0_so, rho1_so);

  const auto pre = run_premeasurement(ctx.psi_s, model);
  const StateVector env_ready = environment_ready_state(cfg.n_atoms);
  const StateVector full = tensor_compose(pre.state, env_ready);
  const LinearOperator h_oe = build_dephasing_hamiltonian(env, full.layout());
  const auto b_op = interference_operator(full.layout());
  const double b_pure = discriminate(full, b_op);

  DecoherenceCurve curve;
  const std::size_t points = cfg.time_points;
  double worst_factor = 0.0, worst_b = 0.0, worst_w = 0.0, worst_rev = 0.0;
  StateVector last = full;
  for (std::size_t k = 0; k < points; ++k) {
    const double t =
        points == 1 ? cfg.t_max : cfg.t_max * static_cast<double>(k) / static_cast<double>(points - 1);
    const auto dec = run_decoherence(full, env, t);
    const double closed = dephasing_factor(env, t, 1, 2);
    const double b_t = discriminate(dec.state, b_op);
    curve.times.push_back(t);
    curve.simulated.push_back(dec.offdiag_factor);
    curve.closed_form.push_back(closed);
    curve.interference.push_back(b_t);
    curve.interference_expected.push_back(b_pure * closed);
    worst_factor = std::max(worst_factor, std::abs(dec.offdiag_factor - closed));
    worst_b = std::max(worst_b, std::abs(b_t - b_pure * closed));
    const auto w = subsystem_weights(dec.state, kObserver);
    for (std::size_t b = 1; b <= model.s_dim; ++b) {
      worst_w = std::max(worst_w, std::abs(w[pointer_index(b)] - ctx.born[b - 1]));
    }
    const StateVector back = reverse_evolution(dec.state, h_oe, t);
    worst_rev = std::max(worst_rev, (back.amplitudes() - full.amplitudes()).norm());
    last = dec.state;
  }
  s.decoherence = curve;
  s.interference["pure_before_dephasing"] = b_pure;
  s.interference["after_dephasing"] = curve.interference.back();
  add_check(s, "offdiag_factor_closed_form", worst_factor, 0.0, kTol.round_trip);
  add_check(s, "interference_damping", worst_b, 0.0, kTol.round_trip);
  add_check(s, "pointer_weights_invariant", worst_w, 0.0, kTol.algebraic);
  add_check(s, "dephasing_reversible", worst_rev, 0.0, kTol.round_trip);

  // φ_D at the end of the dephasing window is the same for every event;
  // events share one immutable copy and only their records differ.
  const DensityMatrix rho_full0 = DensityMatrix::from_pure(tensor_compose(
      ready_state(ctx.psi_s, model), env_ready));
  const DensityMatrix rho_end = DensityMatrix::from_pure(last);
  s.density_checks += validated(rho_end, "dephased state");
  const DensityMatrix rho_so_end = partial_trace(rho_end, {std::string(kSystem), std::string(kObserver)});
  s.density_checks += validated(rho_so_end, "dephased S-O state");
  s.restricted_states["SO:after_dephasing"] = rho_so_end.entries();
  s.restricted_states["O:after_dephasing"] =
      restricted_state(rho_end, SourceKind::kPureEnsemble).o_density.entries();
  add_check(s, "purity_conserved", rho_end.purity() - rho_full0.purity(), 0.0, kTol.round_trip);

  const double t_end = model.duration + curve.times.back();
  std::vector<EventTally> tallies(ctx.sc.n_events);
  for_each_event(ctx.sc.n_events, ctx.options.parallel, [&](std::size_t id) {
    auto& rec = out.records[id];
    rec.event_id = id;
    CounterRng rng(ctx.sc.seed, Stream::kEvents, id);
    auto ev = init_dual(rho_full0, id);
    ev.phi_d = rho_end;
    ev.clock = t_end;
    auto entry = perceive_entry(ev, rng, ctx, 0.0);
    // The record itself formed at the end of the measurement window.
    if (ctx.sc.perception_mode == PerceptionMode::kAtEnd) entry.t = model.duration;
    tallies[id].picks = {entry.j};
    rec.perceptions.push_back(std::move(entry));
  });
  report_frequencies(s, ctx, "O", frequencies(tallies, 0, model.s_dim));
  report_eigenstate(s, ctx, tallies, 0, "O");
}

// Simpson's rule on a uniform grid with an even number of intervals,
// trapezoid otherwise.
double integrate(const std::vector<double>& t, const std::vector<double>& f) {
  const std::size_t n = t.size() - 1;
  const double h = (t.back() - t.front()) / static_cast<double>(n);
  if (n % 2 == 0) {
    double acc = f.front() + f.back();
    for (std::size_t k = 1; k < n; ++k) acc += (k % 2 ? 4.0 : 2.0) * f[k];
    return acc * h / 3.0;
  }
  double acc = 0.5 * (f.front() + f.back());
  for (std::size_t k = 1; k < n; ++k) acc += f[k];
  return acc * h;
}

void run_perception_timing(const Context& ctx, RunResult& out) {
  auto& s = out.summary;
  const auto m = setup_measurement(ctx, s);
  report_measurement(s, ctx, m.rho0, m.rho1);

  const auto& table = *ctx.timing;
  s.timing = table;
  const double lambda = ctx.model.coupling;
  const double c_p = 1.0 / std::pow(std::sin(lambda * ctx.model.duration), 2);
  double worst = 0.0;
  std::vector<double> t_pdf(table.times.size());
  for (std::size_t k = 0; k < table.times.size(); ++k) {
    const double t = table.times[k];
    worst = std::max(worst, std::abs(table.pdf[k] - c_p * lambda * std::sin(2.0 * lambda * t)));
    t_pdf[k] = t * table.pdf[k];
  }
  add_check(s, "perception_pdf_normalized", integrate(table.times, table.pdf), 1.0, 1e-6);
  add_check(s, "perception_pdf_closed_form", worst, 0.0, 1e-8);
  const double mean = integrate(table.times, t_pdf);
  std::vector<double> t2_pdf(table.times.size());
  for (std::size_t k = 0; k < table.times.size(); ++k) t2_pdf[k] = table.times[k] * t_pdf[k];
  const double var = std::max(0.0, integrate(table.times, t2_pdf) - mean * mean);

  std::vector<EventTally> tallies(ctx.sc.n_events);
  std::vector<double> times(ctx.sc.n_events);
  for_each_event(ctx.sc.n_events, ctx.options.parallel, [&](std::size_t id) {
    auto& rec = out.records[id];
    rec.event_id = id;
    CounterRng rng(ctx.sc.seed, Stream::kEvents, id);
    auto ev = evolve_dynamical(init_dual(m.rho0, id), m.prop, ctx.model.duration);
    tallies[id].validations += validated(ev.phi_d, "event state");
    auto entry = perceive_entry(ev, rng, ctx, 0.0);
    tallies[id].picks = {entry.j};
    times[id] = entry.t;
    rec.perceptions.push_back(std::move(entry));
  });
  double sum = 0.0;
  for (std::size_t id = 0; id < times.size(); ++id) {
    sum += times[id];
    s.density_checks += tallies[id].validations;
  }
  if (ctx.sc.perception_mode == PerceptionMode::kSampled) {
    const double n = static_cast<double>(ctx.sc.n_events);
    const double z = var > 0.0 ? std::abs(sum / n - mean) / std::sqrt(var / n) : 0.0;
    s.interference["perception_time_mean"] = sum / n;
    add_check(s, "perception_time_mean", z, 0.0, kStatSigmas, false);
  }
  report_frequencies(s, ctx, "O", frequencies(tallies, 0, ctx.model.s_dim));
  report_eigenstate(s, ctx, tallies, 0, "O");
}

}  // namespace

bool RunSummary::passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const CheckResult& c) { return c.passed || !c.hard; });
}

const CheckResult* RunSummary::find_check(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

double index_correlation(const std::vector<std::size_t>& x, const std::vector<std::size_t>& y) {
  if (x.size() != y.size() || x.empty()) {
    throw InvalidArgument("index_correlation: samples must be nonempty and of equal length");
  }
  // Integer moments keep identical samples at exactly 1.
  __int128 n = static_cast<__int128>(x.size());
  __int128 sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const __int128 a = x[k], b = y[k];
    sx += a;
    sy += b;
    sxx += a * a;
    syy += b * b;
    sxy += a * b;
  }
  const __int128 vx = n * sxx - sx * sx;
  const __int128 vy = n * syy - sy * sy;
  if (vx == 0 || vy == 0) return kNaN;
  const __int128 cov = n * sxy - sx * sy;
  const long double denom = vx == vy ? static_cast<long double>(vx)
                                     : std::sqrt(static_cast<long double>(vx)) *
                                           std::sqrt(static_cast<long double>(vy));
  return static_cast<double>(static_cast<long double>(cov) / denom);
}

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string fingerprint(const Scenario& scenario) {
  std::ostringstream out;
  out << "dualsim " << kVersion << " scenario:" << std::hex << fnv1a(canonical_text(scenario));
  return out.str();
}

RunResult run(const Scenario& scenario, const RunOptions& options) {
  Scenario sc = scenario;
  validate_scenario(sc);
  const MeasurementModel model = sc.model();
  try {
    model.validate();
  } catch (const InvalidArgument& e) {
    throw ScenarioError("system", 0, e.what());
  }

  Context ctx{sc, options, model, system_state(sc.amplitudes), {}, {}};
  for (std::size_t b = 0; b < model.s_dim; ++b) ctx.born.push_back(std::norm(ctx.psi_s[b]));
  if (sc.perception_mode == PerceptionMode::kSampled ||
      sc.experiment == Experiment::kPerceptionTiming) {
    ctx.timing = perception_time_pdf(model, sc.amplitudes,
                                     uniform_grid(model.duration, sc.timing_grid_points));
  }

  RunResult out;
  out.records.resize(sc.n_events);
  auto& s = out.summary;
  s.experiment = std::string(to_string(sc.experiment));
  s.seed = sc.seed;
  s.n_events = sc.n_events;
  s.fingerprint = fingerprint(sc);
  s.warnings = sc.warnings;
  s.born_weights = ctx.born;

  switch (sc.experiment) {
    case Experiment::kPremeasure:
      run_premeasure(ctx, out);
      break;
    case Experiment::kUndo:
      run_undo(ctx, out);
      break;
    case Experiment::kTwoObserver:
      run_two_observer(ctx, out);
      break;
    case Experiment::kDecohere:
      run_decohere(ctx, out);
      break;
    case Experiment::kReductionCompare:
      run_reduction_compare(ctx, out);
      break;
    case Experiment::kPerceptionTiming:
      run_perception_timing(ctx, out);
      break;
  }
  return out;
}

}  // namespace dualsim
