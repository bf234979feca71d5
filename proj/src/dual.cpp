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

#include "dualsim/dual.hpp"

#include <algorithm>
#include <cmath>

#include "dualsim/errors.hpp"

namespace dualsim {

namespace {

using Index = Eigen::Index;

void require_measurement_complete(const DensityMatrix& phi_d, std::string_view observer,
                                  const char* what) {
  const double ready = subsystem_weights(phi_d, observer)[0];
  if (ready > kTol.ready_state) {
    throw PreconditionFailed(std::string(what) + ": measurement by '" + std::string(observer) +
                             "' not complete (ready-state weight " + std::to_string(ready) + ")");
  }
}

// Flat indices whose S and observer digits select branch b, in increasing
// order (so the remaining digits run in layout order).
std::vector<std::size_t> branch_flats(const CompositeLayout& layout, std::string_view observer,
                                      std::size_t branch) {
  const std::size_t s_pos = layout.position(kSystem);
  const std::size_t o_pos = layout.position(observer);
  std::vector<std::size_t> flats;
  for (std::size_t f = 0; f < layout.total_dim(); ++f) {
    if (layout.digit(f, s_pos) == system_index(branch) &&
        layout.digit(f, o_pos) == pointer_index(branch)) {
      flats.push_back(f);
    }
  }
  return flats;
}

Matrix sub_block(const Matrix& m, const std::vector<std::size_t>& rows,
                 const std::vector<std::size_t>& cols) {
  Matrix out(static_cast<Index>(rows.size()), static_cast<Index>(cols.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < cols.size(); ++c) {
      out(static_cast<Index>(r), static_cast<Index>(c)) =
          m(static_cast<Index>(rows[r]), static_cast<Index>(cols[c]));
    }
  }
  return out;
}

JumpCheck jump_check_with(const DualEventState& event, const Propagator& prop, double t) {
  const auto& layout = event.phi_d.layout();
  const std::size_t s_dim = layout.dim_of(kSystem);
  const Matrix u = prop.unitary(t);
  const Matrix& rho = event.phi_d.entries();

  // Reduced state of everything except S and the observer, for branches the
  // event does not populate.
  std::vector<std::string> rest;
  for (const auto& part : layout.subsystems()) {
    if (part.label != kSystem && part.label != event.observer) rest.push_back(part.label);
  }
  const Matrix rest_state =
      rest.empty() ? Matrix::Ones(1, 1) : partial_trace(event.phi_d, rest).entries();

  std::vector<std::vector<std::size_t>> flats;
  for (std::size_t b = 1; b <= s_dim; ++b) flats.push_back(branch_flats(layout, event.observer, b));

  JumpCheck out{true, Eigen::MatrixXd::Zero(static_cast<Index>(s_dim), static_cast<Index>(s_dim))};
  for (std::size_t b = 0; b < s_dim; ++b) {
    Matrix sigma = sub_block(rho, flats[b], flats[b]);
    const double w = sigma.trace().real();
    sigma = w > kTol.algebraic ? Matrix(sigma / w) : rest_state;
    for (std::size_t a = 0; a < s_dim; ++a) {
      const Matrix u_ab = sub_block(u, flats[a], flats[b]);
      const double p = (u_ab * sigma * u_ab.adjoint()).trace().real();
      out.transitions(static_cast<Index>(a), static_cast<Index>(b)) = std::max(0.0, p);
      if (a != b && p > kTol.transition) out.forbidden = false;
    }
  }
  return out;
}

}  // namespace

DualEventState init_dual(const DensityMatrix& rho0, std::uint64_t event_id,
                         std::string_view observer) {
  const double ready = subsystem_weights(rho0, observer)[0];
  if (ready < 1.0 - kTol.ready_state) {
    throw PreconditionFailed("init_dual: observer '" + std::string(observer) +
                             "' is not in its ready state (O_0 weight " + std::to_string(ready) +
                             ")");
  }
  return DualEventState{rho0, 0, event_id, 0.0, std::string(observer)};
}

DualEventState evolve_dynamical(const DualEventState& event, const Propagator& prop, double t) {
  DualEventState out = event;
  out.phi_d = prop.apply(event.phi_d, t);
  out.clock += t;
  return out;
}

LinearOperator perception_projector(const CompositeLayout& layout, std::string_view observer,
                                    std::size_t index) {
  return projector(layout, observer, index);
}

std::vector<double> perception_probabilities(const DensityMatrix& phi_d,
                                             std::string_view observer,
                                             std::span<const PerceptionRecord> held) {
  const auto& layout = phi_d.layout();
  const std::size_t o_pos = layout.position(observer);
  std::vector<std::pair<std::size_t, std::size_t>> conditions;
  for (const auto& rec : held) {
    if (rec.index == 0 || rec.observer == observer) continue;
    conditions.emplace_back(layout.position(rec.observer), rec.index);
  }

  std::vector<double> p(layout.subsystems()[o_pos].dim, 0.0);
  for (std::size_t f = 0; f < layout.total_dim(); ++f) {
    bool match = true;
    for (const auto& [pos, idx] : conditions) match = match && layout.digit(f, pos) == idx;
    if (match) p[layout.digit(f, o_pos)] += std::max(0.0, phi_d(f, f).real());
  }
  double total = 0.0;
  for (double x : p) total += x;
  if (!(total > kTol.algebraic)) {
    throw InvariantBreach("perception: held records select a branch with no weight");
  }
  for (double& x : p) x /= total;
  return p;
}

DualEventState perceive(const DualEventState& event, CounterRng& rng,
                        std::span<const PerceptionRecord> held) {
  require_measurement_complete(event.phi_d, event.observer, "perceive");
  const auto p = perception_probabilities(event.phi_d, event.observer, held);
  DualEventState out = event;
  out.phi_i = sample_index(p, rng.uniform());
  return out;
}

DualStatisticalState DualStatisticalState::from(const DensityMatrix& eta_d,
                                                std::string_view observer) {
  return {eta_d, subsystem_weights(eta_d, observer), std::string(observer)};
}

DensityMatrix DualStatisticalState::perception_mixture() const {
  const auto n = static_cast<Index>(perception_probs.size());
  Matrix m = Matrix::Zero(n, n);
  for (Index j = 0; j < n; ++j) m(j, j) = perception_probs[static_cast<std::size_t>(j)];
  return DensityMatrix(CompositeLayout({{observer, perception_probs.size()}}), std::move(m));
}

DualStatisticalState evolve_dual_statistical(const DualStatisticalState& theta,
                                             const LinearOperator& h, double t) {
  return DualStatisticalState::from(evolve_unitary(theta.eta_d, h, t), theta.observer);
}

std::vector<double> uniform_grid(double duration, std::size_t points) {
  if (points < 2) throw InvalidArgument("uniform_grid: need at least 2 points");
  std::vector<double> grid(points);
  for (std::size_t k = 0; k < points; ++k) {
    grid[k] = duration * static_cast<double>(k) / static_cast<double>(points - 1);
  }
  return grid;
}

PerceptionTimeTable perception_time_pdf(const MeasurementModel& model, const Vector& amplitudes,
                                        const std::vector<double>& grid) {
  if (grid.empty()) throw InvalidArgument("perception_time_pdf: empty grid");
  if (!(model.duration > 0.0)) {
    throw InvalidArgument("perception_time_pdf: duration must be positive");
  }
  model.validate();
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (grid[k] < 0.0 || grid[k] > model.duration * (1.0 + 1e-12) ||
        (k && grid[k] < grid[k - 1])) {
      throw InvalidArgument("perception_time_pdf: grid must be sorted within [0, duration]");
    }
  }

  const StateVector psi_s = StateVector::normalized(
      CompositeLayout({{std::string(kSystem), model.s_dim}}), amplitudes);
  const DensityMatrix rho0 = DensityMatrix::from_pure(ready_state(psi_s, model));
  const LinearOperator h = build_meas_hamiltonian(model, rho0.layout());
  const Propagator prop(h);
  const Complex minus_i(0.0, -1.0);

  const double ready_start = subsystem_weights(rho0, kObserver)[0];
  const double ready_end = subsystem_weights(prop.apply(rho0, model.duration), kObserver)[0];
  const double transferred = ready_start - ready_end;
  if (!(transferred > kTol.algebraic)) {
    throw InvalidArgument("perception_time_pdf: the interaction transfers no weight out of O_0");
  }

  PerceptionTimeTable table;
  table.normalization = 1.0 / transferred;
  const auto& layout = rho0.layout();
  const std::size_t o_pos = layout.position(kObserver);
  for (double t : grid) {
    const DensityMatrix rho = prop.apply(rho0, t);
    const Matrix drho = minus_i * (h.entries() * rho.entries() - rho.entries() * h.entries());
    double rate = 0.0;
    for (std::size_t f = 0; f < layout.total_dim(); ++f) {
      if (layout.digit(f, o_pos) != 0) rate += drho(static_cast<Index>(f), static_cast<Index>(f)).real();
    }
    table.times.push_back(t);
    table.pdf.push_back(table.normalization * rate);
    table.cdf.push_back(table.normalization *
                        (ready_start - subsystem_weights(rho, kObserver)[0]));
  }
  return table;
}

double sample_perception_time(const PerceptionTimeTable& table, double u) {
  if (table.times.empty()) throw InvalidArgument("sample_perception_time: empty table");
  const double target = u * table.cdf.back();
  const auto it = std::lower_bound(table.cdf.begin(), table.cdf.end(), target);
  if (it == table.cdf.begin()) return table.times.front();
  if (it == table.cdf.end()) return table.times.back();
  const auto k = static_cast<std::size_t>(it - table.cdf.begin());
  const double span = table.cdf[k] - table.cdf[k - 1];
  const double frac = span > 0.0 ? (target - table.cdf[k - 1]) / span : 0.0;
  return table.times[k - 1] + frac * (table.times[k] - table.times[k - 1]);
}

JumpCheck jump_forbidden(const DualEventState& event, const LinearOperator& h, double t) {
  require_same_layout(event.phi_d.layout(), h.layout(), "jump_forbidden");
  return jump_check_with(event, Propagator(h), t);
}

EventStep evolve_event(const DualEventState& event, const LinearOperator& h, double t,
                       CounterRng& rng) {
  require_same_layout(event.phi_d.layout(), h.layout(), "evolve_event");
  const Propagator prop(h);
  const JumpCheck check = jump_check_with(event, prop, t);
  EventStep step{evolve_dynamical(event, prop, t), false};
  if (event.phi_i != 0 && !check.forbidden) {
    const auto w = subsystem_weights(step.event.phi_d, event.observer);
    step.event.phi_i = sample_index(w, rng.uniform());
    step.reperceived = true;
  }
  return step;
}

DualEventState undo_dual(const DualEventState& event, const MeasurementModel& model) {
  if (event.phi_i == 0) throw PreconditionFailed("undo_dual: nothing to undo (record is empty)");
  require_measurement_complete(event.phi_d, event.observer, "undo_dual");
  const LinearOperator h =
      build_meas_hamiltonian(model, event.phi_d.layout(), kSystem, event.observer);
  DualEventState out = event;
  out.phi_d = reverse_evolution(event.phi_d, h, model.duration);
  out.phi_i = 0;
  out.clock += model.duration;
  return out;
}

double conditional_branch_weight(const DualEventState& event) {
  const auto& layout = event.phi_d.layout();
  const std::size_t j = event.phi_i;
  if (j == 0 || j > layout.dim_of(kSystem)) return 0.0;
  const std::size_t o_pos = layout.position(event.observer);
  double record = 0.0;
  double branch = 0.0;
  for (const std::size_t f : branch_flats(layout, event.observer, j)) {
    branch += event.phi_d(f, f).real();
  }
  for (std::size_t f = 0; f < layout.total_dim(); ++f) {
    if (layout.digit(f, o_pos) == j) record += event.phi_d(f, f).real();
  }
  return record > 0.0 ? branch / record : 0.0;
}

ReductionBaselineState reduction_baseline(const StateVector& psi_s, CounterRng& rng) {
  std::vector<double> p;
  for (std::size_t k = 0; k < psi_s.dim(); ++k) p.push_back(std::norm(psi_s[k]));
  const std::size_t branch = sample_index(p, rng.uniform()) + 1;
  return {branch, StateVector::basis(psi_s.layout(), {system_index(branch)})};
}

ReductionBaselineState baseline_undo(const ReductionBaselineState& state,
                                     const MeasurementModel& model) {
  // Collapsed record |s_b⟩|O_b⟩ (with the interaction's branch phase), then
  // the reversing interaction returns O to its ready state.
  const Premeasurement pre = run_premeasurement(state.s_state, model);
  const LinearOperator h = build_meas_hamiltonian(model, pre.state.layout());
  const StateVector back = reverse_evolution(pre.state, h, model.duration);
  if (subsystem_weights(back, kObserver)[0] < 1.0 - kTol.full_round_trip) {
    throw InvariantBreach("baseline_undo: observer memory not erased");
  }
  Vector s(static_cast<Index>(model.s_dim));
  for (std::size_t k = 0; k < model.s_dim; ++k) {
    s[static_cast<Index>(k)] = back[back.layout().flat_index({k, 0})];
  }
  return {state.branch, StateVector::normalized(state.s_state.layout(), s)};
}

std::size_t baseline_remeasure(const ReductionBaselineState& state, const MeasurementModel& model,
                               CounterRng& rng) {
  const Premeasurement pre = run_premeasurement(state.s_state, model);
  const auto w = subsystem_weights(pre.state, kObserver);
  return sample_index(w, rng.uniform());
}

}  // namespace dualsim
