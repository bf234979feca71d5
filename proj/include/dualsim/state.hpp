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

#include <complex>
#include <memory>

#include <Eigen/Dense>

#include "dualsim/layout.hpp"

namespace dualsim {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

/// Normalized pure state over a composite layout.
class StateVector {
 public:
  /// Throws InvalidArgument on a length mismatch and InvariantBreach when the
  /// Euclidean norm differs from 1 by more than the algebraic tolerance.
  StateVector(CompositeLayout layout, Vector amplitudes);

  /// Rescales `amplitudes` to unit norm first; throws on a zero vector.
  static StateVector normalized(CompositeLayout layout, Vector amplitudes);

  /// Product basis state |digits⟩.
  static StateVector basis(CompositeLayout layout, const std::vector<std::size_t>& digits);

  const CompositeLayout& layout() const { return layout_; }
  const Vector& amplitudes() const { return amplitudes_; }
  std::size_t dim() const { return static_cast<std::size_t>(amplitudes_.size()); }
  Complex operator[](std::size_t i) const { return amplitudes_[static_cast<Eigen::Index>(i)]; }

  /// ⟨this|other⟩.
  Complex inner(const StateVector& other) const;

 private:
  CompositeLayout layout_;
  Vector amplitudes_;
};

/// Result of DensityMatrix::invariants(): worst deviations observed.
struct DensityInvariants {
  double hermiticity_error = 0.0;
  double trace_error = 0.0;
  double min_eigenvalue = 0.0;

  bool ok() const;
};

/// Statistical state. Immutable; copies share storage.
class DensityMatrix {
 public:
  /// Checks shape, Hermiticity and unit trace (cheap, always). Positivity is
  /// checked by from_entries() and invariants() since it needs a spectrum.
  DensityMatrix(CompositeLayout layout, Matrix entries);

  /// Fully validated construction including positivity.
  static DensityMatrix from_entries(CompositeLayout layout, Matrix entries);
  static DensityMatrix from_pure(const StateVector& psi);
  static DensityMatrix maximally_mixed(CompositeLayout layout);
  /// Convex combination Σ w_k ρ_k; weights must be nonnegative and sum to 1.
  static DensityMatrix mixture(const std::vector<double>& weights,
                               const std::vector<DensityMatrix>& states);

  const CompositeLayout& layout() const { return layout_; }
  const Matrix& entries() const { return *entries_; }
  std::size_t dim() const { return layout_.total_dim(); }
  Complex operator()(std::size_t r, std::size_t c) const {
    return (*entries_)(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
  }

  Complex trace() const { return entries_->trace(); }
  /// Tr(ρ²).
  double purity() const;
  DensityInvariants invariants() const;
  /// Throws InvariantBreach naming `context` when invariants() fails.
  void validate(const char* context) const;

 private:
  CompositeLayout layout_;
  std::shared_ptr<const Matrix> entries_;
};

/// Square operator on a composite layout. Immutable; copies share storage.
class LinearOperator {
 public:
  LinearOperator(CompositeLayout layout, Matrix entries);

  static LinearOperator identity(CompositeLayout layout);
  static LinearOperator zero(CompositeLayout layout);

  const CompositeLayout& layout() const { return layout_; }
  const Matrix& entries() const { return *entries_; }
  std::size_t dim() const { return layout_.total_dim(); }
  /// Set at construction: max |A − A†| within the algebraic tolerance.
  bool is_hermitian() const { return hermitian_; }
  double hermiticity_error() const;

  LinearOperator operator+(const LinearOperator& rhs) const;
  LinearOperator operator-(const LinearOperator& rhs) const;
  LinearOperator operator*(const LinearOperator& rhs) const;
  LinearOperator scaled(Complex factor) const;
  LinearOperator adjoint() const;
  /// Largest singular value.
  double operator_norm() const;

 private:
  CompositeLayout layout_;
  std::shared_ptr<const Matrix> entries_;
  bool hermitian_ = false;
};

/// max_{ij} |A_ij − conj(A_ji)|.
double hermiticity_error(const Matrix& m);

void require_same_layout(const CompositeLayout& a, const CompositeLayout& b, const char* what);

}  // namespace dualsim
