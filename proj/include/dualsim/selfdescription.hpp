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

#include <string_view>
#include <vector>

#include "dualsim/measurement.hpp"

namespace dualsim {

/// Where a restricted state came from. Identical matrices from different
/// origins mean different things, so the origin travels with the matrix.
enum class SourceKind { kPureEnsemble, kMixedEnsemble, kIndividualEvent };

std::string_view to_string(SourceKind kind);

/// The observer's self-description: the MS state restricted to O.
struct RestrictedState {
  DensityMatrix o_density;
  SourceKind source_kind;
};

/// Traces out everything except `observer_label`. For kIndividualEvent the
/// result must be a pointer-basis projector; throws InvariantBreach otherwise.
RestrictedState restricted_state(const DensityMatrix& rho_ms, SourceKind kind,
                                 std::string_view observer_label = kObserver);

/// |O_j⟩⟨O_j| as an individual-event restriction.
RestrictedState individual_restriction(std::size_t o_dim, std::size_t pointer,
                                       std::string_view observer_label = kObserver);

/// w_j = Tr(P^O_j R_O) over the O basis.
std::vector<double> pointer_weights(const RestrictedState& r);

struct Distinguishability {
  bool distinguishable;
  double distance;
};

/// Trace distance of the two restrictions and whether it exceeds `tol`.
/// A false verdict means O cannot tell the underlying MS states apart.
Distinguishability breuer_distinguishable(const RestrictedState& a, const RestrictedState& b,
                                          double tol = kTol.distinguishability);

/// True iff premeasuring the two S states leaves O with restricted states
/// within the algebraic tolerance of each other.
bool phase_class_check(const StateVector& psi_a, const StateVector& psi_b,
                       const MeasurementModel& model);

}  // namespace dualsim
