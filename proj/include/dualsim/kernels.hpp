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

#include <cstddef>
#include <span>
#include <vector>

#include "dualsim/state.hpp"

/// Dense kernels behind the quantum-core operations.
///
/// The functions in `dualsim::kernels` are OpenMP-parallel and used by the
/// library. `dualsim::kernels::reference` holds straightforward serial
/// versions kept for tests and the benchmark; they are written along a
/// different loop order so the two sets cross-check each other.
namespace dualsim::kernels {

/// Placement of a local operator inside a composite: `dims` are the
/// composite subsystem dimensions, `targets` the positions (in listed order
/// of the local operator's factors) it acts on.
struct Placement {
  std::vector<std::size_t> dims;
  std::vector<std::size_t> targets;
};

Matrix kron(const Matrix& a, const Matrix& b);
Vector kron(const Vector& a, const Vector& b);

/// Reduced matrix on subsystems with keep[k] == true, in listed order.
Matrix partial_trace(const Matrix& rho, std::span<const std::size_t> dims,
                     std::span<const bool> keep);

/// u · rho · u†.
Matrix conjugate(const Matrix& u, const Matrix& rho);

/// ρ_kl · exp(−i (e_k − e_l) t): conjugation by a diagonal unitary.
Matrix conjugate_diagonal(const Eigen::VectorXd& energies, double t, const Matrix& rho);

/// ψ_k · exp(−i e_k t).
Vector apply_diagonal(const Eigen::VectorXd& energies, double t, const Vector& psi);

/// Local operator extended by the identity on all non-target subsystems.
Matrix embed(const Placement& placement, const Matrix& local);

namespace reference {

Matrix kron(const Matrix& a, const Matrix& b);
Vector kron(const Vector& a, const Vector& b);
Matrix partial_trace(const Matrix& rho, std::span<const std::size_t> dims,
                     std::span<const bool> keep);
Matrix conjugate(const Matrix& u, const Matrix& rho);
Matrix conjugate_diagonal(const Eigen::VectorXd& energies, double t, const Matrix& rho);
Vector apply_diagonal(const Eigen::VectorXd& energies, double t, const Vector& psi);
Matrix embed(const Placement& placement, const Matrix& local);

}  // namespace reference

/// Number of OpenMP threads the parallel kernels will use (1 without OpenMP).
int max_threads();

}  // namespace dualsim::kernels
