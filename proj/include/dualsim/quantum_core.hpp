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

#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "dualsim/state.hpp"

namespace dualsim {

// --- composition -----------------------------------------------------------

StateVector tensor_compose(std::span<const StateVector> parts);
LinearOperator tensor_compose(std::span<const LinearOperator> parts);
DensityMatrix tensor_compose(std::span<const DensityMatrix> parts);

StateVector tensor_compose(const StateVector& a, const StateVector& b);
LinearOperator tensor_compose(const LinearOperator& a, const LinearOperator& b);
DensityMatrix tensor_compose(const DensityMatrix& a, const DensityMatrix& b);

/// Heterogeneous list form: throws InvalidArgument when kinds are mixed or
/// the list is empty.
using Tensorable = std::variant<StateVector, LinearOperator>;
Tensorable tensor_compose(std::span<const Tensorable> parts);

// --- reduction -------------------------------------------------------------

/// Reduced state on the kept subsystems (listed-order preserved).
DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<std::string>& keep);

// --- operators -------------------------------------------------------------

/// |index⟩⟨index| on `subsystem`, identity elsewhere.
LinearOperator projector(const CompositeLayout& layout, std::string_view subsystem,
                         std::size_t basis_index);

/// Σ_k values[k] |k⟩⟨k| on `subsystem`, identity elsewhere.
LinearOperator diagonal_observable(const CompositeLayout& layout, std::string_view subsystem,
                                   const std::vector<double>& values);

/// Extends `local` (acting on `subsystems`, in the given order) by the
/// identity on the rest of the layout.
LinearOperator embed(const CompositeLayout& layout, const std::vector<std::string>& subsystems,
                     const Matrix& local);

// --- measurement-free statistics -------------------------------------------

/// Tr(ρA); A must be Hermitian. The imaginary part is discarded.
double expectation(const DensityMatrix& rho, const LinearOperator& a);
double expectation(const StateVector& psi, const LinearOperator& a);

/// ½ Σ |eig(a − b)|.
double trace_distance(const DensityMatrix& a, const DensityMatrix& b);

/// Probabilities of each basis state of `subsystem`, read off the diagonal.
std::vector<double> subsystem_weights(const DensityMatrix& rho, std::string_view subsystem);
std::vector<double> subsystem_weights(const StateVector& psi, std::string_view subsystem);

// --- evolution -------------------------------------------------------------

/// Closed-form propagator exp(−iHt) from a Hermitian eigendecomposition of H.
///
/// The decomposition is computed once; `apply` can then be called for any t.
/// Diagonal generators skip the eigensolver (their eigenbasis is the
/// computational basis) so large dephasing Hamiltonians stay cheap.
class Propagator {
 public:
  /// Throws NotHermitian when `h` is not Hermitian.
  explicit Propagator(const LinearOperator& h);

  const CompositeLayout& layout() const { return layout_; }
  const Eigen::VectorXd& energies() const { return energies_; }
  bool diagonal() const { return diagonal_; }

  Matrix unitary(double t) const;
  StateVector apply(const StateVector& psi, double t) const;
  DensityMatrix apply(const DensityMatrix& rho, double t) const;

 private:
  CompositeLayout layout_;
  Eigen::VectorXd energies_;
  Matrix eigenvectors_;  // empty when diagonal_
  bool diagonal_ = false;
};

StateVector evolve_unitary(const StateVector& psi, const LinearOperator& h, double t);
DensityMatrix evolve_unitary(const DensityMatrix& rho, const LinearOperator& h, double t);

}  // namespace dualsim
