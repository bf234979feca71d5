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

#include "dualsim/selfdescription.hpp"

#include <cmath>
#include <string>

#include "dualsim/errors.hpp"

namespace dualsim {

std::string_view to_string(SourceKind kind) {
  switch (kind) {
    case SourceKind::kPureEnsemble:
      return "pure_ensemble";
    case SourceKind::kMixedEnsemble:
      return "mixed_ensemble";
    case SourceKind::kIndividualEvent:
      return "individual_event";
  }
  return "unknown";
}

RestrictedState restricted_state(const DensityMatrix& rho_ms, SourceKind kind,
                                 std::string_view observer_label) {
  RestrictedState r{partial_trace(rho_ms, {std::string(observer_label)}), kind};
  if (kind == SourceKind::kIndividualEvent) {
    const Matrix& m = r.o_density.entries();
    Eigen::Index j = 0;
    m.diagonal().real().maxCoeff(&j);
    Matrix expected = Matrix::Zero(m.rows(), m.cols());
    expected(j, j) = 1.0;
    if ((m - expected).cwiseAbs().maxCoeff() > kTol.algebraic) {
      throw InvariantBreach("individual-event restriction is not a pointer-basis projector");
    }
  }
  return r;
}

RestrictedState individual_restriction(std::size_t o_dim, std::size_t pointer,
                                       std::string_view observer_label) {
  if (pointer >= o_dim) {
    throw InvalidArgument("individual_restriction: pointer index out of range");
  }
  CompositeLayout layout({{std::string(observer_label), o_dim}});
  return {DensityMatrix::from_pure(StateVector::basis(layout, {pointer})),
          SourceKind::kIndividualEvent};
}

std::vector<double> pointer_weights(const RestrictedState& r) {
  const auto& label = r.o_density.layout().subsystems().front().label;
  std::vector<double> w;
  for (std::size_t j = 0; j < r.o_density.dim(); ++j) {
    w.push_back(expectation(r.o_density, projector(r.o_density.layout(), label, j)));
  }
  return w;
}

Distinguishability breuer_distinguishable(const RestrictedState& a, const RestrictedState& b,
                                          double tol) {
  if (a.o_density.dim() != b.o_density.dim()) {
    throw LayoutMismatch("breuer_distinguishable: observer dimensions differ (" +
                         std::to_string(a.o_density.dim()) + " vs " +
                         std::to_string(b.o_density.dim()) + ")");
  }
  const double d = trace_distance(a.o_density, b.o_density);
  return {d > tol, d};
}

bool phase_class_check(const StateVector& psi_a, const StateVector& psi_b,
                       const MeasurementModel& model) {
  const auto ra = restricted_state(
      DensityMatrix::from_pure(run_premeasurement(psi_a, model).state), SourceKind::kPureEnsemble);
  const auto rb = restricted_state(
      DensityMatrix::from_pure(run_premeasurement(psi_b, model).state), SourceKind::kPureEnsemble);
  return !breuer_distinguishable(ra, rb, kTol.algebraic).distinguishable;
}

}  // namespace dualsim
