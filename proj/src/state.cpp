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

#include "dualsim/state.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "dualsim/errors.hpp"

namespace dualsim {

namespace {

void require_square(const CompositeLayout& layout, const Matrix& m, const char* what) {
  const auto n = static_cast<Eigen::Index>(layout.total_dim());
  if (m.rows() != n || m.cols() != n) {
    throw InvalidArgument(std::string(what) + ": expected " + std::to_string(n) + "x" +
                          std::to_string(n) + " matrix for layout " + layout.describe() +
                          ", got " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

}  // namespace

double hermiticity_error(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

void require_same_layout(const CompositeLayout& a, const CompositeLayout& b, const char* what) {
  if (!(a == b)) {
    throw LayoutMismatch(std::string(what) + ": layout " + a.describe() + " vs " + b.describe());
  }
}

// --- StateVector -----------------------------------------------------------

StateVector::StateVector(CompositeLayout layout, Vector amplitudes)
    : layout_(std::move(layout)), amplitudes_(std::move(amplitudes)) {
  if (static_cast<std::size_t>(amplitudes_.size()) != layout_.total_dim()) {
    throw InvalidArgument("state vector length " + std::to_string(amplitudes_.size()) +
                          " does not match layout " + layout_.describe());
  }
  const double norm = amplitudes_.norm();
  if (std::abs(norm - 1.0) > kTol.algebraic) {
    throw InvariantBreach("state vector norm " + std::to_string(norm) + " is not 1");
  }
}

StateVector StateVector::normalized(CompositeLayout layout, Vector amplitudes) {
  const double norm = amplitudes.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw InvalidArgument("cannot normalize a zero or non-finite amplitude vector");
  }
  amplitudes /= norm;
  return StateVector(std::move(layout), std::move(amplitudes));
}

StateVector StateVector::basis(CompositeLayout layout, const std::vector<std::size_t>& digits) {
  Vector amps = Vector::Zero(static_cast<Eigen::Index>(layout.total_dim()));
  amps[static_cast<Eigen::Index>(layout.flat_index(digits))] = 1.0;
  return StateVector(std::move(layout), std::move(amps));
}

Complex StateVector::inner(const StateVector& other) const {
  require_same_layout(layout_, other.layout_, "inner product");
  return amplitudes_.dot(other.amplitudes_);
}

// --- DensityMatrix ---------------------------------------------------------

bool DensityInvariants::ok() const {
  return hermiticity_error <= kTol.algebraic && trace_error <= kTol.algebraic &&
         min_eigenvalue >= -kTol.positivity;
}

DensityMatrix::DensityMatrix(CompositeLayout layout, Matrix entries)
    : layout_(std::move(layout)) {
  require_square(layout_, entries, "density matrix");
  const double herm = hermiticity_error(entries);
  if (herm > kTol.algebraic) {
    throw InvariantBreach("density matrix is not Hermitian (error " + std::to_string(herm) + ")");
  }
  const Complex tr = entries.trace();
  if (std::abs(tr - Complex(1.0, 0.0)) > kTol.algebraic) {
    throw InvariantBreach("density matrix trace is " + std::to_string(tr.real()) + "+" +
                          std::to_string(tr.imag()) + "i, not 1");
  }
  entries_ = std::make_shared<const Matrix>(std::move(entries));
}

DensityMatrix DensityMatrix::from_entries(CompositeLayout layout, Matrix entries) {
  DensityMatrix rho(std::move(layout), std::move(entries));
  rho.validate("density matrix construction");
  return rho;
}

DensityMatrix DensityMatrix::from_pure(const StateVector& psi) {
  const auto& a = psi.amplitudes();
  return DensityMatrix(psi.layout(), a * a.adjoint());
}

DensityMatrix DensityMatrix::maximally_mixed(CompositeLayout layout) {
  const auto n = static_cast<Eigen::Index>(layout.total_dim());
  Matrix m = Matrix::Identity(n, n) / static_cast<double>(n);
  return DensityMatrix(std::move(layout), std::move(m));
}

DensityMatrix DensityMatrix::mixture(const std::vector<double>& weights,
                                     const std::vector<DensityMatrix>& states) {
  if (weights.empty() || weights.size() != states.size()) {
    throw InvalidArgument("mixture needs one weight per state and at least one state");
  }
  double total = 0.0;
  for (double w : weights) {
    if (w < 0.0) throw InvalidArgument("mixture weights must be nonnegative");
    total += w;
  }
  if (std::abs(total - 1.0) > kTol.algebraic) {
    throw InvalidArgument("mixture weights sum to " + std::to_string(total) + ", not 1");
  }
  Matrix acc = Matrix::Zero(static_cast<Eigen::Index>(states.front().dim()),
                            static_cast<Eigen::Index>(states.front().dim()));
  for (std::size_t k = 0; k < states.size(); ++k) {
    require_same_layout(states.front().layout(), states[k].layout(), "mixture");
    acc += weights[k] * states[k].entries();
  }
  return DensityMatrix(states.front().layout(), std::move(acc));
}

double DensityMatrix::purity() const {
  // Tr(ρ²) = Σ |ρ_ij|² for Hermitian ρ.
  return entries_->squaredNorm();
}

DensityInvariants DensityMatrix::invariants() const {
  DensityInvariants out;
  out.hermiticity_error = hermiticity_error(*entries_);
  out.trace_error = std::abs(entries_->trace() - Complex(1.0, 0.0));
  Eigen::SelfAdjointEigenSolver<Matrix> solver(*entries_, Eigen::EigenvaluesOnly);
  out.min_eigenvalue = solver.eigenvalues().minCoeff();
  return out;
}

void DensityMatrix::validate(const char* context) const {
  const auto inv = invariants();
  if (!inv.ok()) {
    throw InvariantBreach(std::string(context) + ": density matrix invariant breach (hermiticity " +
                          std::to_string(inv.hermiticity_error) + ", trace " +
                          std::to_string(inv.trace_error) + ", min eigenvalue " +
                          std::to_string(inv.min_eigenvalue) + ")");
  }
}

// --- LinearOperator --------------------------------------------------------

LinearOperator::LinearOperator(CompositeLayout layout, Matrix entries)
    : layout_(std::move(layout)) {
  require_square(layout_, entries, "linear operator");
  hermitian_ = dualsim::hermiticity_error(entries) <= kTol.algebraic;
  entries_ = std::make_shared<const Matrix>(std::move(entries));
}

LinearOperator LinearOperator::identity(CompositeLayout layout) {
  const auto n = static_cast<Eigen::Index>(layout.total_dim());
  return LinearOperator(std::move(layout), Matrix::Identity(n, n));
}

LinearOperator LinearOperator::zero(CompositeLayout layout) {
  const auto n = static_cast<Eigen::Index>(layout.total_dim());
  return LinearOperator(std::move(layout), Matrix::Zero(n, n));
}

double LinearOperator::hermiticity_error() const { return dualsim::hermiticity_error(*entries_); }

LinearOperator LinearOperator::operator+(const LinearOperator& rhs) const {
  require_same_layout(layout_, rhs.layout_, "operator sum");
  return LinearOperator(layout_, *entries_ + *rhs.entries_);
}

LinearOperator LinearOperator::operator-(const LinearOperator& rhs) const {
  require_same_layout(layout_, rhs.layout_, "operator difference");
  return LinearOperator(layout_, *entries_ - *rhs.entries_);
}

LinearOperator LinearOperator::operator*(const LinearOperator& rhs) const {
  require_same_layout(layout_, rhs.layout_, "operator product");
  return LinearOperator(layout_, *entries_ * *rhs.entries_);
}

LinearOperator LinearOperator::scaled(Complex factor) const {
  return LinearOperator(layout_, factor * *entries_);
}

LinearOperator LinearOperator::adjoint() const {
  return LinearOperator(layout_, entries_->adjoint());
}

double LinearOperator::operator_norm() const {
  if (entries_->size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(*entries_);
  return svd.singularValues()(0);
}

}  // namespace dualsim
