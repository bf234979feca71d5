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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dualsim/measurement.hpp"
#include "dualsim/rng.hpp"

namespace dualsim {

/// Dual event state Φ = (φ_D, φ_I) for one observer in one event.
///
/// φ_D is the full dynamical density matrix; it only ever evolves unitarily.
/// φ_I is the observer's perception record: an index into the observer's
/// pointer basis, 0 meaning no information (|O_0⟩⟨O_0|). The projector form
/// is reconstructed with perception_projector().
struct DualEventState {
  DensityMatrix phi_d;
  std::size_t phi_i = 0;
  std::uint64_t event_id = 0;
  double clock = 0.0;
  std::string observer = std::string(kObserver);
};

/// A record held by some observer in the same event.
struct PerceptionRecord {
  std::string observer;
  std::size_t index = 0;
};

/// Starts an event with φ_I = 0. Throws PreconditionFailed unless the
/// observer is in its ready state (weight of O_0 ≥ 1 − ready tolerance).
DualEventState init_dual(const DensityMatrix& rho0, std::uint64_t event_id = 0,
                         std::string_view observer = kObserver);

/// φ_D → U φ_D U† for duration t, clock advanced; φ_I untouched. Use during
/// the measurement window where φ_I is still 0, or via evolve_event() after.
DualEventState evolve_dynamical(const DualEventState& event, const Propagator& prop, double t);

/// Draws φ_I = j with probability Tr(P^O_j φ_D). φ_D is returned unchanged.
///
/// Records already held by other observers in the same event condition the
/// draw on their branch: the probabilities come from P ρ P / Tr(P ρ) with P
/// the product of their pointer projectors. This is what makes a second
/// observer who measures after the first agree with the first.
///
/// Throws PreconditionFailed while the ready state still has weight.
DualEventState perceive(const DualEventState& event, CounterRng& rng,
                        std::span<const PerceptionRecord> held = {});

/// Perception probabilities Tr(P^O_j φ_D) conditioned on `held` records.
std::vector<double> perception_probabilities(const DensityMatrix& phi_d,
                                             std::string_view observer,
                                             std::span<const PerceptionRecord> held = {});

/// |O_j⟩⟨O_j| on the observer subsystem of `layout`.
LinearOperator perception_projector(const CompositeLayout& layout, std::string_view observer,
                                    std::size_t index);

/// Dual statistical state Θ = (η_D, R_V) with R_V = Σ P_j |O_j⟩⟨O_j|.
struct DualStatisticalState {
  DensityMatrix eta_d;
  std::vector<double> perception_probs;
  std::string observer = std::string(kObserver);

  static DualStatisticalState from(const DensityMatrix& eta_d,
                                   std::string_view observer = kObserver);
  /// R_V as a density matrix on the observer subsystem.
  DensityMatrix perception_mixture() const;
};

/// η_D evolves by the Liouville equation; P_j = Tr(P^O_j η_D) is recomputed.
DualStatisticalState evolve_dual_statistical(const DualStatisticalState& theta,
                                             const LinearOperator& h, double t);

/// Tabulated perception-time density P_p(t) = c_p Σ_{i≠0} dP_i/dt.
struct PerceptionTimeTable {
  std::vector<double> times;
  std::vector<double> pdf;
  /// ∫_0^t P_p, exact at the grid points (the weights themselves integrate
  /// the derivative).
  std::vector<double> cdf;
  double normalization = 1.0;  // c_p
};

/// dP_i/dt is evaluated analytically as Tr(P_i · (−i)[H, ρ(t)]) from the
/// evolved state; c_p = 1 / (P_0(0) − P_0(Δt)). Grid points must lie in
/// [0, Δt] and be sorted; throws InvalidArgument on an empty grid or a
/// non-positive Δt.
PerceptionTimeTable perception_time_pdf(const MeasurementModel& model, const Vector& amplitudes,
                                        const std::vector<double>& grid);

/// Uniform grid of `points` ≥ 2 points on [0, Δt].
std::vector<double> uniform_grid(double duration, std::size_t points);

/// Inverse-CDF draw of a perception time from a tabulated table.
double sample_perception_time(const PerceptionTimeTable& table, double u);

struct JumpCheck {
  /// True when every off-diagonal branch transition probability vanishes:
  /// φ_I must then be held fixed.
  bool forbidden;
  /// P'_ab = |⟨Ψ_a|U(t)|Ψ_b⟩|² over branches Ψ_b = |s_b⟩|O_b⟩(rest).
  Eigen::MatrixXd transitions;
};

/// Branch states are the event's own branches: Π_b φ_D Π_b normalized, with
/// Π_b = |s_b⟩⟨s_b| ⊗ |O_b⟩⟨O_b|. A branch with no weight in φ_D uses
/// |s_b O_b⟩ times the reduced state of the remaining subsystems.
JumpCheck jump_forbidden(const DualEventState& event, const LinearOperator& h, double t);

struct EventStep {
  DualEventState event;
  bool reperceived = false;
};

/// Post-measurement evolution with the no-spontaneous-jump rule: when the
/// evolution cannot move weight between branches φ_I is kept; otherwise the
/// step counts as a new effective measurement and φ_I is redrawn from the
/// evolved weights (flagged).
EventStep evolve_event(const DualEventState& event, const LinearOperator& h, double t,
                       CounterRng& rng);

/// Reverses the premeasurement interaction on φ_D and erases φ_I.
/// Throws PreconditionFailed when φ_I is already 0 or the measurement is not
/// complete.
DualEventState undo_dual(const DualEventState& event, const MeasurementModel& model);

/// Weight of branch |s_j O_j⟩ in φ_D conditioned on the record φ_I = j.
double conditional_branch_weight(const DualEventState& event);

/// Textbook reduction comparator: S collapses to |s_b⟩ with probability
/// |a_b|²; `branch` is b (1-based).
struct ReductionBaselineState {
  std::size_t branch = 1;
  StateVector s_state;
};

ReductionBaselineState reduction_baseline(const StateVector& psi_s, CounterRng& rng);

/// Memory erasure under reduction: |s_b⟩|O_b⟩ → |s_b⟩|O_0⟩. S keeps its
/// collapsed state.
ReductionBaselineState baseline_undo(const ReductionBaselineState& state,
                                     const MeasurementModel& model);

/// Measures the collapsed S again (premeasure, then collapse); returns the
/// branch read. Deterministic for a collapsed state.
std::size_t baseline_remeasure(const ReductionBaselineState& state, const MeasurementModel& model,
                               CounterRng& rng);

}  // namespace dualsim
