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

#include <utility>
#include <vector>

#include "dualsim/measurement.hpp"

namespace dualsim {

/// B = |O_a⟩⟨O_b| ⊗ |s_a⟩⟨s_b| + h.c. for a branch pair (a, b), extended
/// by the identity on every other subsystem. Hermitian and traceless.
struct InterferenceObservable {
  LinearOperator op;
  std::pair<std::size_t, std::size_t> branches;
};

/// Branch indices are 1..s_dim and must differ.
InterferenceObservable interference_operator(const CompositeLayout& layout,
                                             std::pair<std::size_t, std::size_t> branches = {1, 2},
                                             std::string_view system_label = kSystem,
                                             std::string_view observer_label = kObserver);

/// B̄ = Tr(ρB).
double discriminate(const DensityMatrix& rho, const InterferenceObservable& b);
/// ⟨ψ|B|ψ⟩ without forming the density matrix.
double discriminate(const StateVector& psi, const InterferenceObservable& b);

/// ‖[Q_O ⊗ I, B]‖: how badly the observer's own pointer reading fails to
/// commute with the interference observable.
double pointer_incompatibility(const CompositeLayout& layout, const InterferenceObservable& b,
                               const std::vector<double>& pointer_values,
                               std::string_view observer_label = kObserver);

/// Σ over branch pairs a < b of |B̄_ab|.
double coherence_score(const StateVector& psi, std::size_t s_dim);
double coherence_score(const DensityMatrix& rho, std::size_t s_dim);

}  // namespace dualsim
