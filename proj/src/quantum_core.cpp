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

#include "dualsim/quantum_core.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include <Eigen/Eigenvalues>

#include "dualsim/errors.hpp"
#include "dualsim/kernels.hpp"

namespace dualsim {

namespace {

template <typename T>
void require_nonempty(std::span<const T> parts) {
  if (parts.empty()) throw InvalidArgument("tensor_compose: empty list");
}

void require_hermitian(const LinearOperator& op, const char* what) {
  if (!op.is_hermitian()) {
    throw NotHermitian(std::string(what) + ": operator is not Hermitian (error " +
                       std::to_string(op.hermiticity_error()) + ")");
  }
}

bool is_diagonal(const Matrix& m) {
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      if (r != c && m(r, c) != Complex{}) return false;
    }
  }
  return true;
}

}  // namespace

// --- composition -----------------------------------------------------------

StateVector tensor_compose(std::span<const StateVector> parts) {
  require_nonempty(parts);
  CompositeLayout layout = parts.front().layout();
  Vector amps = parts.front().amplitudes();
  for (std::size_t k = 1; k < parts.size(); ++k) {
    layout = layout.concat(parts[k].layout());
    amps = kernels::kron(amps, parts[k].amplitudes());
  }
  return StateVector(std::move(layout), std::move(amps));
}

LinearOperator tensor_compose(std::span<const LinearOperator> parts) {
  require_nonempty(parts);
  CompositeLayout layout = parts.front().layout();
  Matrix m = parts.front().entries();
  for (std::size_t k = 1; k < parts.size(); ++k) {
    layout = layout.concat(parts[k].layout());
    m = kernels::kron(m, parts[k].entries());
  }
  return LinearOperator(std::move(layout), std::move(m));
}

DensityMatrix tensor_compose(std::span<const DensityMatrix> parts) {
  require_nonempty(parts);
  CompositeLayout layout = parts.front().layout();
  Matrix m = parts.front().entries();
  for (std::size_t k = 1; k < parts.size(); ++k) {
    layout = layout.concat(parts[k].layout());
    m = kernels::kron(m, parts[k].entries());
  }
  return DensityMatrix(std::move(layout), std::move(m));
}

StateVector tensor_compose(const StateVector& a, const StateVector& b) {
  const StateVector parts[] = {a, b};
  return tensor_compose(std::span<const StateVector>(parts));
}

LinearOperator tensor_compose(const LinearOperator& a, const LinearOperator& b) {
  const LinearOperator parts[] = {a, b};
  return tensor_compose(std::span<const LinearOperator>(parts));
}

DensityMatrix tensor_compose(const DensityMatrix& a, const DensityMatrix& b) {
  const DensityMatrix parts[] = {a, b};
  return tensor_compose(std::span<const DensityMatrix>(parts));
}

Tensorable tensor_compose(std::span<const Tensorable> parts) {
  require_nonempty(parts);
  const auto kind = parts.front().index();
  for (const auto& p : parts) {
    if (p.index() != kind) throw InvalidArgument("tensor_compose: mixed state and operator kinds");
  }
  if (kind == 0) {
    std::vector<StateVector> states;
    states.reserve(parts.size());
    for (const auto& p : parts) states.push_back(std::get<StateVector>(p));
    return tensor_compose(std::span<const StateVector>(states));
  }
  std::vector<LinearOperator> ops;
  ops.reserve(parts.size());
  for (const auto& p : parts) ops.push_back(std::get<LinearOperator>(p));
  return tensor_compose(std::span<const LinearOperator>(ops));
}

// --- reduction -------------------------------------------------------------

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<std::string>& keep) {
  if (keep.empty()) throw InvalidArgument("partial_trace: keep set is empty");
  const auto& layout = rho.layout();
  const std::size_t m = layout.size();
  std::unique_ptr<bool[]> mask(new bool[m]());
  for (const auto& label : keep) mask[layout.position(label)] = true;

  std::vector<Subsystem> kept;
  for (std::size_t k = 0; k < m; ++k) {
    if (mask[k]) kept.push_back(layout.subsystems()[k]);
  }
  if (kept.size() == m) return rho;

  const auto dims = layout.dims();
  Matrix reduced = kernels::partial_trace(rho.entries(), dims, std::span<const bool>(mask.get(), m));
  return DensityMatrix(CompositeLayout(std::move(kept)), std::move(reduced));
}

// --- operators -------------------------------------------------------------

LinearOperator embed(const CompositeLayout& layout, const std::vector<std::string>& subsystems,
                     const Matrix& local) {
  kernels::Placement placement{layout.dims(), {}};
  for (const auto& label : subsystems) {
    const std::size_t pos = layout.position(label);
    if (std::find(placement.targets.begin(), placement.targets.end(), pos) !=
        placement.targets.end()) {
      throw InvalidArgument("embed: subsystem '" + label + "' listed twice");
    }
    placement.targets.push_back(pos);
  }
  return LinearOperator(layout, kernels::embed(placement, local));
}

LinearOperator projector(const CompositeLayout& layout, std::string_view subsystem,
                         std::size_t basis_index) {
  const std::size_t d = layout.dim_of(subsystem);
  if (basis_index >= d) {
    throw InvalidArgument("projector: basis index " + std::to_string(basis_index) +
                          " out of range for subsystem '" + std::string(subsystem) +
                          "' of dimension " + std::to_string(d));
  }
  Matrix local = Matrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  local(static_cast<Eigen::Index>(basis_index), static_cast<Eigen::Index>(basis_index)) = 1.0;
  return embed(layout, {std::string(subsystem)}, local);
}

LinearOperator diagonal_observable(const CompositeLayout& layout, std::string_view subsystem,
                                   const std::vector<double>& values) {
  const std::size_t d = layout.dim_of(subsystem);
  if (values.size() != d) {
    throw InvalidArgument("diagonal_observable: expected " + std::to_string(d) + " values for '" +
                          std::string(subsystem) + "', got " + std::to_string(values.size()));
  }
  Matrix local = Matrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::size_t k = 0; k < d; ++k) {
    local(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) = values[k];
  }
  return embed(layout, {std::string(subsystem)}, local);
}

// --- statistics ------------------------------------------------------------

double expectation(const DensityMatrix& rho, const LinearOperator& a) {
  require_same_layout(rho.layout(), a.layout(), "expectation");
  require_hermitian(a, "expectation");
  // Tr(ρA) = Σ_ij ρ_ij A_ji
  return (rho.entries().transpose().cwiseProduct(a.entries())).sum().real();
}

double expectation(const StateVector& psi, const LinearOperator& a) {
  require_same_layout(psi.layout(), a.layout(), "expectation");
  require_hermitian(a, "expectation");
  return psi.amplitudes().dot(a.entries() * psi.amplitudes()).real();
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  require_same_layout(a.layout(), b.layout(), "trace_distance");
  Matrix diff = a.entries() - b.entries();
  // Symmetrize away rounding so the Hermitian solver sees an exact Hermitian input.
  diff = 0.5 * (diff + diff.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<Matrix> solver(diff, Eigen::EigenvaluesOnly);
  return std::min(1.0, 0.5 * solver.eigenvalues().cwiseAbs().sum());
}

std::vector<double> subsystem_weights(const DensityMatrix& rho, std::string_view subsystem) {
  const auto& layout = rho.layout();
  const std::size_t pos = layout.position(subsystem);
  std::vector<double> w(layout.subsystems()[pos].dim, 0.0);
  for (std::size_t flat = 0; flat < layout.total_dim(); ++flat) {
    w[layout.digit(flat, pos)] += rho(flat, flat).real();
  }
  return w;
}

std::vector<double> subsystem_weights(const StateVector& psi, std::string_view subsystem) {
  const auto& layout = psi.layout();
  const std::size_t pos = layout.position(subsystem);
  std::vector<double> w(layout.subsystems()[pos].dim, 0.0);
  for (std::size_t flat = 0; flat < layout.total_dim(); ++flat) {
    w[layout.digit(flat, pos)] += std::norm(psi[flat]);
  }
  return w;
}

// --- evolution -------------------------------------------------------------

Propagator::Propagator(const LinearOperator& h) : layout_(h.layout()) {
  require_hermitian(h, "propagator");
  const Matrix& m = h.entries();
  if (is_diagonal(m)) {
    diagonal_ = true;
    energies_ = m.diagonal().real();
    return;
  }
  // Hermitian part only; the anti-Hermitian residue is below tolerance.
  const Matrix herm = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(herm);
  if (solver.info() != Eigen::Success) {
    throw InvariantBreach("propagator: Hermitian eigendecomposition failed");
  }
  energies_ = solver.eigenvalues();
  eigenvectors_ = solver.eigenvectors();
}

Matrix Propagator::unitary(double t) const {
  const auto n = static_cast<Eigen::Index>(layout_.total_dim());
  Vector phases(n);
  for (Eigen::Index k = 0; k < n; ++k) phases[k] = std::polar(1.0, -energies_[k] * t);
  if (diagonal_) return phases.asDiagonal();
  return eigenvectors_ * phases.asDiagonal() * eigenvectors_.adjoint();
}

StateVector Propagator::apply(const StateVector& psi, double t) const {
  require_same_layout(layout_, psi.layout(), "evolve_unitary");
  if (diagonal_) {
    return StateVector(layout_, kernels::apply_diagonal(energies_, t, psi.amplitudes()));
  }
  Vector coeffs = eigenvectors_.adjoint() * psi.amplitudes();
  coeffs = kernels::apply_diagonal(energies_, t, coeffs);
  return StateVector(layout_, eigenvectors_ * coeffs);
}

DensityMatrix Propagator::apply(const DensityMatrix& rho, double t) const {
  require_same_layout(layout_, rho.layout(), "evolve_unitary");
  Matrix out = diagonal_ ? kernels::conjugate_diagonal(energies_, t, rho.entries())
                         : kernels::conjugate(unitary(t), rho.entries());
  // Remove rounding-level anti-Hermitian residue and trace drift.
  out = 0.5 * (out + out.adjoint()).eval();
  out /= out.trace().real();
  return DensityMatrix(layout_, std::move(out));
}

StateVector evolve_unitary(const StateVector& psi, const LinearOperator& h, double t) {
  require_same_layout(psi.layout(), h.layout(), "evolve_unitary");
  return Propagator(h).apply(psi, t);
}

DensityMatrix evolve_unitary(const DensityMatrix& rho, const LinearOperator& h, double t) {
  require_same_layout(rho.layout(), h.layout(), "evolve_unitary");
  return Propagator(h).apply(rho, t);
}

}  // namespace dualsim
