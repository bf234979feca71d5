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

#include <random>

#include <omp.h>

#include <gtest/gtest.h>

#include "dualsim/errors.hpp"
#include "dualsim/kernels.hpp"
#include "oracles.hpp"

namespace dualsim::kernels {
namespace {

Matrix random_matrix(std::mt19937_64& gen, Eigen::Index r, Eigen::Index c) {
  std::normal_distribution<double> n;
  Matrix m(r, c);
  for (Eigen::Index i = 0; i < r; ++i) {
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = Complex(n(gen), n(gen));
  }
  return m;
}

TEST(Kernels, KronAgreesWithReferenceAndOracle) {
  std::mt19937_64 gen(11);
  const Matrix a = random_matrix(gen, 3, 2), b = random_matrix(gen, 4, 5);
  const Matrix expected = oracle::kron(a, b);
  EXPECT_LT((kron(a, b) - expected).norm(), 1e-13);
  EXPECT_LT((reference::kron(a, b) - expected).norm(), 1e-13);
  const Vector u = oracle::random_vector(gen, 3), v = oracle::random_vector(gen, 7);
  EXPECT_LT((kron(u, v) - oracle::kron(u, v)).norm(), 1e-14);
  EXPECT_LT((reference::kron(u, v) - oracle::kron(u, v)).norm(), 1e-14);
}

TEST(Kernels, PartialTraceAgreesOnEverySubset) {
  std::mt19937_64 gen(12);
  const std::vector<std::size_t> dims{2, 3, 2, 2};
  const Matrix rho = oracle::random_density(gen, 24);
  for (unsigned mask = 1; mask < 16; ++mask) {
    std::vector<bool> keep_v(4);
    bool keep_a[4];
    for (int k = 0; k < 4; ++k) keep_a[k] = keep_v[static_cast<std::size_t>(k)] = (mask >> k) & 1u;
    const Matrix expected = oracle::partial_trace(rho, dims, keep_v);
    const std::span<const bool> keep(keep_a, 4);
    EXPECT_LT((partial_trace(rho, dims, keep) - expected).norm(), 1e-13) << mask;
    EXPECT_LT((reference::partial_trace(rho, dims, keep) - expected).norm(), 1e-13) << mask;
  }
}

TEST(Kernels, PartialTraceRejectsBadShapes) {
  const Matrix rho = Matrix::Identity(6, 6) / 6.0;
  const std::vector<std::size_t> dims{2, 2};
  bool keep[2] = {true, false};
  EXPECT_THROW(partial_trace(rho, dims, std::span<const bool>(keep, 2)), InvalidArgument);
  EXPECT_THROW(partial_trace(rho, std::vector<std::size_t>{2, 3}, std::span<const bool>(keep, 1)),
               InvalidArgument);
}

TEST(Kernels, ConjugateAgrees) {
  std::mt19937_64 gen(13);
  const Matrix h = oracle::random_hermitian(gen, 17);
  const Matrix u = oracle::propagator(h, 0.9);
  const Matrix rho = oracle::random_density(gen, 17);
  const Matrix expected = u * rho * u.adjoint();
  EXPECT_LT((conjugate(u, rho) - expected).norm(), 1e-13);
  EXPECT_LT((reference::conjugate(u, rho) - expected).norm(), 1e-13);
}

TEST(Kernels, DiagonalEvolutionAgrees) {
  std::mt19937_64 gen(14);
  Eigen::VectorXd e(9);
  for (int k = 0; k < 9; ++k) e[k] = static_cast<double>(k) - 3.3;
  const Matrix rho = oracle::random_density(gen, 9);
  const Matrix u = oracle::propagator(Matrix(e.cast<Complex>().asDiagonal()), 0.37);
  const Matrix expected = u * rho * u.adjoint();
  EXPECT_LT((conjugate_diagonal(e, 0.37, rho) - expected).norm(), 1e-13);
  EXPECT_LT((reference::conjugate_diagonal(e, 0.37, rho) - expected).norm(), 1e-13);
  const Vector psi = oracle::random_vector(gen, 9);
  EXPECT_LT((apply_diagonal(e, 0.37, psi) - u * psi).norm(), 1e-13);
  EXPECT_LT((reference::apply_diagonal(e, 0.37, psi) - u * psi).norm(), 1e-13);
}

TEST(Kernels, EmbedAgreesWithKroneckerConstruction) {
  std::mt19937_64 gen(15);
  // Local operator on (C, A) inside A⊗B⊗C: compare against an explicit
  // permutation of kron(local, I_B).
  const std::vector<std::size_t> dims{2, 3, 2};
  const Matrix local = random_matrix(gen, 4, 4);
  const Placement p{dims, {2, 0}};
  const Matrix fast = embed(p, local);
  const Matrix slow = reference::embed(p, local);
  EXPECT_LT((fast - slow).norm(), 1e-14);

  const Matrix ordered = oracle::kron(local, Matrix::Identity(3, 3));  // (C, A, B) order
  Matrix expected(12, 12);
  for (std::size_t r = 0; r < 12; ++r) {
    for (std::size_t c = 0; c < 12; ++c) {
      const auto dr = oracle::digits(r, dims), dc = oracle::digits(c, dims);
      const auto pr = oracle::flat({dr[2], dr[0], dr[1]}, {2, 2, 3});
      const auto pc = oracle::flat({dc[2], dc[0], dc[1]}, {2, 2, 3});
      expected(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          ordered(static_cast<Eigen::Index>(pr), static_cast<Eigen::Index>(pc));
    }
  }
  EXPECT_LT((fast - expected).norm(), 1e-14);
  EXPECT_THROW(embed(Placement{dims, {3}}, Matrix::Identity(2, 2)), InvalidArgument);
  EXPECT_THROW(embed(Placement{dims, {1}}, Matrix::Identity(2, 2)), InvalidArgument);
}

TEST(Kernels, ParallelResultIsThreadCountIndependent) {
  std::mt19937_64 gen(16);
  const Matrix rho = oracle::random_density(gen, 64);
  const Matrix u = oracle::propagator(oracle::random_hermitian(gen, 64), 0.5);
  const std::vector<std::size_t> dims{4, 4, 4};
  bool keep[3] = {true, false, true};
  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  const Matrix a = partial_trace(rho, dims, std::span<const bool>(keep, 3));
  const Matrix ca = conjugate(u, rho);
  omp_set_num_threads(4);
  const Matrix b = partial_trace(rho, dims, std::span<const bool>(keep, 3));
  const Matrix cb = conjugate(u, rho);
  omp_set_num_threads(saved);
  EXPECT_EQ(a, b);
  EXPECT_EQ(ca, cb);
  EXPECT_GE(max_threads(), 1);
}

}  // namespace
}  // namespace dualsim::kernels
