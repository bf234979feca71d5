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

#include "dualsim/interference.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "dualsim/errors.hpp"

namespace dualsim {

InterferenceObservable interference_operator(const CompositeLayout& layout,
                                             std::pair<std::size_t, std::size_t> branches,
                                             std::string_view system_label,
                                             std::string_view observer_label) {
  const std::size_t s_dim = layout.dim_of(system_label);
  const std::size_t o_dim = layout.dim_of(observer_label);
  const auto [a, b] = branches;
  if (a == b || a < 1 || b < 1 || a > s_dim || b > s_dim || pointer_index(a) >= o_dim ||
      pointer_index(b) >= o_dim) {
    throw InvalidArgument("interference_operator: invalid branch pair (" + std::to_string(a) +
                          ", " + std::to_string(b) + ")");
  }
  const auto o = static_cast<Eigen::Index>(o_dim);
  const auto s = static_cast<Eigen::Index>(s_dim);
  // Local operator on (O, S), index = o_digit * s_dim + s_digit.
  Matrix local = Matrix::Zero(o * s, o * s);
  const auto row = static_cast<Eigen::Index>(pointer_index(a)) * s +
                   static_cast<Eigen::Index>(system_index(a));
  const auto col = static_cast<Eigen::Index>(pointer_index(b)) * s +
                   static_cast<Eigen::Index>(system_index(b));
  local(row, col) = 1.0;
  local(col, row) = 1.0;
  return {embed(layout, {std::string(observer_label), std::string(system_label)}, local),
          branches};
}

double discriminate(const DensityMatrix& rho, const InterferenceObservable& b) {
  return expectation(rho, b.op);
}

double discriminate(const StateVector& psi, const InterferenceObservable& b) {
  return expectation(psi, b.op);
}

double pointer_incompatibility(const CompositeLayout& layout, const InterferenceObservable& b,
                               const std::vector<double>& pointer_values,
                               std::string_view observer_label) {
  require_same_layout(layout, b.op.layout(), "pointer_incompatibility");
  const LinearOperator q = diagonal_observable(layout, observer_label, pointer_values);
  const Matrix comm = q.entries() * b.op.entries() - b.op.entries() * q.entries();
  // [Q, B] is anti-Hermitian for Hermitian Q and B; i[Q, B] is Hermitian with
  // the same singular values.
  const Matrix herm = Complex(0.0, 1.0) * comm;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (herm + herm.adjoint()),
                                               Eigen::EigenvaluesOnly);
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

namespace {

template <typename State>
double coherence_score_impl(const State& state, std::size_t s_dim) {
  double total = 0.0;
  for (std::size_t a = 1; a <= s_dim; ++a) {
    for (std::size_t b = a + 1; b <= s_dim; ++b) {
      total += std::abs(discriminate(state, interference_operator(state.layout(), {a, b})));
    }
  }
  return total;
}

}  // namespace

double coherence_score(const StateVector& psi, std::size_t s_dim) {
  return coherence_score_impl(psi, s_dim);
}

double coherence_score(const DensityMatrix& rho, std::size_t s_dim) {
  return coherence_score_impl(rho, s_dim);
}

}  // namespace dualsim
