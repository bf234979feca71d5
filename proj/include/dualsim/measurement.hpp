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

#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "dualsim/quantum_core.hpp"

namespace dualsim {

inline constexpr std::string_view kSystem = "S";
inline constexpr std::string_view kObserver = "O";
inline constexpr std::string_view kSecondObserver = "O'";

/// Label of environment atom k (0-based): "E1", "E2", ...
std::string environment_label(std::size_t k);

// Branches are numbered 1..s_dim. Branch b pairs the measured eigenstate
// |s_b⟩ (S basis index b − 1) with the pointer state |O_b⟩ (O basis index b);
// O basis index 0 is the ready state |O_0⟩. Perception indices use the same
// numbering, with 0 meaning "no information".
inline std::size_t system_index(std::size_t branch) { return branch - 1; }
inline std::size_t pointer_index(std::size_t branch) { return branch; }

/// S–O premeasurement: H_I = λ Σ_b |s_b⟩⟨s_b| ⊗ (|O_b⟩⟨O_0| + |O_0⟩⟨O_b|)
/// switched on for a window of length `duration`.
struct MeasurementModel {
  std::size_t s_dim = 2;
  std::size_t o_dim = 3;
  double coupling = std::numbers::pi / 2.0;
  double duration = 1.0;

  /// λ·Δt = π/2: complete transfer of every branch into its pointer state.
  static MeasurementModel calibrated(std::size_t s_dim, std::size_t o_dim,
                                     double duration = 1.0);

  /// Throws InvalidArgument unless s_dim ≥ 2, o_dim ≥ s_dim + 1, Δt > 0.
  void validate() const;

  bool operator==(const MeasurementModel&) const = default;
};

/// Default pointer eigenvalues (0, +1, −1, +2, −2, ...) over O_0, O_1, ...
std::vector<double> default_pointer_values(std::size_t o_dim);

/// O–E dephasing: H_OE = Σ_k g_k · Q_O ⊗ σ_z^(k), Q_O = Σ_i q_i |O_i⟩⟨O_i|.
struct EnvironmentModel {
  std::vector<double> couplings;       // g_k, one per atom
  std::vector<double> pointer_values;  // q^O_i over the O basis

  std::size_t n_atoms() const { return couplings.size(); }

  /// Pointer values must cover the O basis, vanish on O_0 and be distinct on
  /// the perception states O_1..O_{s_dim}.
  void validate(std::size_t s_dim, std::size_t o_dim) const;
};

CompositeLayout measurement_layout(const MeasurementModel& model);
/// S ⊗ O ⊗ E1 ⊗ ... ⊗ En.
CompositeLayout decoherence_layout(const MeasurementModel& model, std::size_t n_atoms);

/// Amplitudes over S as a state on the single-subsystem layout "S".
StateVector system_state(const Vector& amplitudes);
/// ψ_s ⊗ |O_0⟩.
StateVector ready_state(const StateVector& psi_s, const MeasurementModel& model);
/// |+⟩^{⊗n} on atoms E1..En.
StateVector environment_ready_state(std::size_t n_atoms);

LinearOperator build_meas_hamiltonian(const MeasurementModel& model,
                                      const CompositeLayout& layout,
                                      std::string_view system_label = kSystem,
                                      std::string_view observer_label = kObserver);

struct Premeasurement {
  StateVector state;
  /// ⟨s_b O_b| U(Δt) |s_b O_0⟩ per branch: the factor H_I attaches to each
  /// branch (−i for every branch at calibration).
  std::vector<Complex> branch_phases;
};

/// Evolves ψ_s ⊗ |O_0⟩ under H_I for Δt: Σ a_b · phase_b |s_b⟩|O_b⟩.
Premeasurement run_premeasurement(const StateVector& psi_s, const MeasurementModel& model);

/// Σ_b |a_b|² |s_b⟩⟨s_b| ⊗ |O_b⟩⟨O_b|: the mixed state a reduction postulate
/// would ascribe to S⊗O after measurement.
DensityMatrix pointer_mixture(const StateVector& psi_s, const MeasurementModel& model);

/// |s_b O_b⟩⟨s_b O_b|: one individual event of the mixture.
DensityMatrix individual_event_state(const MeasurementModel& model, std::size_t branch);

LinearOperator build_dephasing_hamiltonian(const EnvironmentModel& env,
                                           const CompositeLayout& layout,
                                           std::string_view observer_label = kObserver);

struct Decoherence {
  StateVector state;
  /// ⟨E_1(t)|E_2(t)⟩ read from the evolved state.
  Complex offdiag_factor;
  /// ⟨E_a(t)|E_b(t)⟩ for all branch pairs (0-based rows/cols = branch − 1).
  Matrix branch_overlaps;
};

/// Evolves an S⊗O⊗E state under H_OE for time t. The environment must start
/// in |+⟩^{⊗n}; otherwise throws PreconditionFailed.
Decoherence run_decoherence(const StateVector& state, const EnvironmentModel& env, double t);

/// Π_k cos((q_a − q_b) g_k t): the closed form of ⟨E_a(t)|E_b(t)⟩.
double dephasing_factor(const EnvironmentModel& env, double t, std::size_t branch_a,
                        std::size_t branch_b);

/// Applies exp(+iHt).
StateVector reverse_evolution(const StateVector& state, const LinearOperator& h, double t);
DensityMatrix reverse_evolution(const DensityMatrix& state, const LinearOperator& h, double t);

/// Σ_b q_b |s_b⟩⟨s_b| ⊗ I: the measured observable Q.
LinearOperator system_observable(const CompositeLayout& layout, const std::vector<double>& q);

}  // namespace dualsim
