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

#include <cmath>
#include <random>
#include <variant>

#include <gtest/gtest.h>

#include "dualsim/errors.hpp"
#include "dualsim/quantum_core.hpp"
#include "oracles.hpp"

namespace dualsim {
namespace {

CompositeLayout qubit(const std::string& label) { return CompositeLayout({{label, 2}}); }

StateVector ket(const CompositeLayout& layout, std::vector<std::size_t> digits) {
  return StateVector::basis(layout, digits);
}

DensityMatrix pure(const StateVector& psi) { return DensityMatrix::from_pure(psi); }

LinearOperator op(const CompositeLayout& layout, const Matrix& m) { return {layout, m}; }

// --- layout and value types ---------------------------------------------------

TEST(Layout, DimensionsAndStrides) {
  const CompositeLayout l({{"S", 2}, {"O", 3}, {"E1", 2}});
  EXPECT_EQ(l.total_dim(), 12u);
  EXPECT_EQ(l.position("O"), 1u);
  EXPECT_EQ(l.stride(0), 6u);
  EXPECT_EQ(l.stride(1), 2u);
  EXPECT_EQ(l.flat_index({1, 2, 1}), 11u);
  EXPECT_EQ(l.digit(11, 1), 2u);
}

TEST(Layout, RejectsBadSubsystems) {
  EXPECT_THROW(CompositeLayout(std::vector<Subsystem>{}), InvalidArgument);
  EXPECT_THROW(CompositeLayout({{"S", 2}, {"S", 3}}), InvalidArgument);
  EXPECT_THROW(CompositeLayout({{"S", 0}}), InvalidArgument);
  EXPECT_THROW(CompositeLayout({{"", 2}}), InvalidArgument);
  EXPECT_THROW(CompositeLayout({{"S", 2}}).position("O"), InvalidArgument);
}

TEST(Layout, AllowsPlaceholderDimension) {
  const CompositeLayout l({{"S", 2}, {"unit", 1}});
  EXPECT_EQ(l.total_dim(), 2u);
}

TEST(Layout, DimensionCap) {
  EXPECT_THROW(CompositeLayout({{"A", 64}, {"B", 65}}), DimensionCapExceeded);
  EXPECT_NO_THROW(CompositeLayout({{"A", 64}, {"B", 64}}));
  EXPECT_THROW(CompositeLayout({{"A", 4}, {"B", 4}}, 15), DimensionCapExceeded);
}

TEST(StateVectorTest, NormEnforced) {
  Vector v(2);
  v << 1.0, 1.0;
  EXPECT_THROW(StateVector(qubit("A"), v), InvariantBreach);
  EXPECT_NEAR(StateVector::normalized(qubit("A"), v).amplitudes().norm(), 1.0, 1e-15);
  EXPECT_THROW(StateVector(qubit("A"), Vector::Ones(3) / std::sqrt(3.0)), InvalidArgument);
}

TEST(DensityMatrixTest, InvariantsChecked) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = 1.0;
  m(0, 1) = 0.3;
  EXPECT_THROW(DensityMatrix(qubit("A"), m), InvariantBreach);  // not Hermitian
  Matrix t = Matrix::Identity(2, 2);
  EXPECT_THROW(DensityMatrix(qubit("A"), t), InvariantBreach);  // trace 2
  Matrix neg(2, 2);
  neg << 1.5, 0.0, 0.0, -0.5;
  EXPECT_THROW(DensityMatrix::from_entries(qubit("A"), neg), InvariantBreach);
  const auto mm = DensityMatrix::maximally_mixed(qubit("A"));
  EXPECT_TRUE(mm.invariants().ok());
  EXPECT_NEAR(mm.purity(), 0.5, 1e-15);
}

TEST(LinearOperatorTest, HermitianFlag) {
  EXPECT_TRUE(op(qubit("A"), oracle::sigma_x()).is_hermitian());
  Matrix m = Matrix::Zero(2, 2);
  m(0, 1) = 1.0;
  const auto a = op(qubit("A"), m);
  EXPECT_FALSE(a.is_hermitian());
  EXPECT_TRUE((a + a.adjoint()).is_hermitian());
  EXPECT_NEAR(op(qubit("A"), oracle::sigma_z()).operator_norm(), 1.0, 1e-14);
}

// --- tensor_compose -------------------------------------------------------------

TEST(TensorCompose, UnitFactorLeavesStateUnchanged) {
  Vector v(2);
  v << 0.6, Complex(0.0, 0.8);
  const StateVector psi(qubit("A"), v);
  const StateVector unit(CompositeLayout({{"U", 1}}), Vector::Ones(1));
  const auto out = tensor_compose(psi, unit);
  EXPECT_EQ(out.dim(), 2u);
  EXPECT_EQ(out.amplitudes(), v);
}

TEST(TensorCompose, DimensionProduct) {
  const auto out = tensor_compose(ket(qubit("A"), {0}), ket(CompositeLayout({{"B", 3}}), {1}));
  EXPECT_EQ(out.dim(), 6u);
  EXPECT_EQ(out.layout().describe(), CompositeLayout({{"A", 2}, {"B", 3}}).describe());
}

TEST(TensorCompose, KroneckerOrder) {
  const auto plus =
      StateVector::normalized(qubit("A"), Vector::Ones(2));
  const auto out = tensor_compose(plus, ket(qubit("B"), {0}));
  const double r = 1.0 / std::sqrt(2.0);
  Vector expected(4);
  expected << r, 0.0, r, 0.0;
  EXPECT_LT((out.amplitudes() - expected).norm(), 1e-15);
}

TEST(TensorCompose, OperatorsMatchOracle) {
  std::mt19937_64 gen(1);
  const Matrix a = oracle::random_hermitian(gen, 2), b = oracle::random_hermitian(gen, 3);
  const auto out = tensor_compose(op(qubit("A"), a), op(CompositeLayout({{"B", 3}}), b));
  EXPECT_LT((out.entries() - oracle::kron(a, b)).norm(), 1e-14);
}

TEST(TensorCompose, VariantErrors) {
  std::vector<Tensorable> empty;
  EXPECT_THROW(tensor_compose(std::span<const Tensorable>(empty)), InvalidArgument);
  std::vector<Tensorable> mixed{ket(qubit("A"), {0}), LinearOperator::identity(qubit("B"))};
  EXPECT_THROW(tensor_compose(std::span<const Tensorable>(mixed)), InvalidArgument);
  std::vector<Tensorable> states{ket(qubit("A"), {0}), ket(qubit("B"), {1})};
  const auto out = tensor_compose(std::span<const Tensorable>(states));
  ASSERT_TRUE(std::holds_alternative<StateVector>(out));
  EXPECT_EQ(std::get<StateVector>(out)[1], Complex(1.0));
}

TEST(TensorCompose, DuplicateLabelsRejected) {
  EXPECT_THROW(tensor_compose(ket(qubit("A"), {0}), ket(qubit("A"), {0})), InvalidArgument);
}

// --- partial_trace ---------------------------------------------------------------

TEST(PartialTrace, ProductStateFactorizes) {
  std::mt19937_64 gen(2);
  const auto ra = DensityMatrix::from_entries(qubit("A"), oracle::random_density(gen, 2));
  const auto rb =
      DensityMatrix::from_entries(CompositeLayout({{"B", 3}}), oracle::random_density(gen, 3));
  const auto out = partial_trace(tensor_compose(ra, rb), {"A"});
  EXPECT_LT((out.entries() - ra.entries()).norm(), 1e-12);
  EXPECT_EQ(out.layout(), ra.layout());
}

TEST(PartialTrace, BellStateReducesToMaximallyMixed) {
  const CompositeLayout l({{"A", 2}, {"B", 2}});
  Vector v = Vector::Zero(4);
  v[0] = v[3] = 1.0 / std::sqrt(2.0);
  const auto rho = pure(StateVector(l, v));
  for (const char* keep : {"A", "B"}) {
    const auto r = partial_trace(rho, {keep});
    EXPECT_LT((r.entries() - 0.5 * Matrix::Identity(2, 2)).norm(), 1e-15) << keep;
  }
}

TEST(PartialTrace, MatchesOracleOnRandomStates) {
  std::mt19937_64 gen(3);
  const CompositeLayout l({{"A", 2}, {"B", 3}, {"C", 2}});
  for (int trial = 0; trial < 10; ++trial) {
    const auto rho = DensityMatrix::from_entries(l, oracle::random_density(gen, 12));
    const auto ac = partial_trace(rho, {"A", "C"});
    const Matrix expected = oracle::partial_trace(rho.entries(), {2, 3, 2}, {true, false, true});
    EXPECT_LT((ac.entries() - expected).norm(), 1e-13);
    EXPECT_NEAR(ac.trace().real(), 1.0, 1e-12);
  }
}

TEST(PartialTrace, KeepOrderFollowsLayout) {
  std::mt19937_64 gen(4);
  const CompositeLayout l({{"A", 2}, {"B", 3}});
  const auto rho = DensityMatrix::from_entries(l, oracle::random_density(gen, 6));
  EXPECT_LT((partial_trace(rho, {"B", "A"}).entries() - rho.entries()).norm(), 1e-15);
}

TEST(PartialTrace, Errors) {
  const auto rho = DensityMatrix::maximally_mixed(CompositeLayout({{"A", 2}, {"B", 2}}));
  EXPECT_THROW(partial_trace(rho, {"C"}), InvalidArgument);
  EXPECT_THROW(partial_trace(rho, {}), InvalidArgument);
}

// --- evolve_unitary ---------------------------------------------------------------

TEST(EvolveUnitary, ZeroGeneratorIsIdentity) {
  std::mt19937_64 gen(5);
  const StateVector psi(CompositeLayout({{"A", 3}}), oracle::random_vector(gen, 3));
  const auto out = evolve_unitary(psi, LinearOperator::zero(psi.layout()), 2.7);
  EXPECT_LT((out.amplitudes() - psi.amplitudes()).norm(), 1e-15);
}

TEST(EvolveUnitary, PauliXQuarterPeriod) {
  const double lambda = 0.7;
  const auto h = op(qubit("A"), lambda * oracle::sigma_x());
  const auto out = evolve_unitary(ket(qubit("A"), {0}), h, oracle::kPi / (2.0 * lambda));
  EXPECT_LT(std::abs(out[0]), 1e-15);
  EXPECT_LT(std::abs(out[1] - Complex(0.0, -1.0)), 1e-14);
}

TEST(EvolveUnitary, MatchesTaylorOracle) {
  std::mt19937_64 gen(6);
  for (std::size_t n : {2u, 3u, 6u, 12u}) {
    const CompositeLayout l({{"A", n}});
    const Matrix h = oracle::random_hermitian(gen, n, 1.5);
    const double t = 0.83;
    const Propagator prop(op(l, h));
    EXPECT_LT((prop.unitary(t) - oracle::propagator(h, t)).norm(), 1e-11) << n;
    const auto rho = DensityMatrix::from_entries(l, oracle::random_density(gen, n));
    const Matrix u = oracle::propagator(h, t);
    const auto out = evolve_unitary(rho, op(l, h), t);
    EXPECT_LT((out.entries() - u * rho.entries() * u.adjoint()).norm(), 1e-11) << n;
    EXPECT_NEAR(out.trace().real(), 1.0, 1e-12);
  }
}

TEST(EvolveUnitary, DiagonalGeneratorFastPath) {
  Matrix h = Matrix::Zero(3, 3);
  h(0, 0) = 1.0;
  h(1, 1) = -2.0;
  h(2, 2) = 0.5;
  const CompositeLayout l({{"A", 3}});
  const Propagator prop(op(l, h));
  EXPECT_TRUE(prop.diagonal());
  EXPECT_LT((prop.unitary(0.4) - oracle::propagator(h, 0.4)).norm(), 1e-14);
}

TEST(EvolveUnitary, Errors) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 1) = 1.0;
  EXPECT_THROW(Propagator(op(qubit("A"), m)), NotHermitian);
  const auto h = op(qubit("B"), oracle::sigma_x());
  EXPECT_THROW(evolve_unitary(ket(qubit("A"), {0}), h, 1.0), LayoutMismatch);
}

// --- projector / expectation / trace distance --------------------------------------

TEST(Projector, IdempotentAndComplete) {
  const CompositeLayout l({{"S", 2}, {"O", 3}});
  LinearOperator sum = LinearOperator::zero(l);
  for (std::size_t j = 0; j < 3; ++j) {
    const auto p = projector(l, "O", j);
    EXPECT_TRUE(p.is_hermitian());
    EXPECT_LT(((p * p).entries() - p.entries()).norm(), 1e-12);
    EXPECT_NEAR(p.entries().trace().real(), 2.0, 1e-15);
    sum = sum + p;
  }
  EXPECT_LT((sum.entries() - Matrix::Identity(6, 6)).norm(), 1e-15);
  EXPECT_THROW(projector(l, "O", 3), InvalidArgument);
}

TEST(Expectation, Examples) {
  const auto l = qubit("A");
  const auto zero = pure(ket(l, {0}));
  EXPECT_NEAR(expectation(zero, LinearOperator::identity(l)), 1.0, 1e-15);
  EXPECT_NEAR(expectation(zero, op(l, oracle::sigma_z())), 1.0, 1e-15);
  EXPECT_NEAR(expectation(DensityMatrix::maximally_mixed(l), op(l, oracle::sigma_x())), 0.0, 1e-15);
  Matrix m = Matrix::Zero(2, 2);
  m(0, 1) = 1.0;
  EXPECT_THROW(expectation(zero, op(l, m)), NotHermitian);
}

TEST(TraceDistance, Examples) {
  const auto l = qubit("A");
  const auto zero = pure(ket(l, {0}));
  const auto one = pure(ket(l, {1}));
  EXPECT_NEAR(trace_distance(zero, zero), 0.0, 1e-15);
  EXPECT_NEAR(trace_distance(zero, one), 1.0, 1e-15);
  EXPECT_NEAR(trace_distance(zero, DensityMatrix::maximally_mixed(l)), 0.5, 1e-15);
  EXPECT_THROW(trace_distance(zero, pure(ket(qubit("B"), {0}))), LayoutMismatch);
}

TEST(TraceDistance, MatchesSingularValueOracle) {
  std::mt19937_64 gen(7);
  const CompositeLayout l({{"A", 4}});
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = DensityMatrix::from_entries(l, oracle::random_density(gen, 4));
    const auto b = DensityMatrix::from_entries(l, oracle::random_density(gen, 4));
    const double d = trace_distance(a, b);
    EXPECT_NEAR(d, oracle::trace_distance(a.entries(), b.entries()), 1e-12);
    EXPECT_GE(d, 0.0);
    EXPECT_LE(d, 1.0);
  }
}

TEST(SubsystemWeights, StateAndDensityAgree) {
  std::mt19937_64 gen(8);
  const CompositeLayout l({{"S", 2}, {"O", 3}});
  const StateVector psi(l, oracle::random_vector(gen, 6));
  const auto ws = subsystem_weights(psi, "O");
  const auto wr = subsystem_weights(pure(psi), "O");
  for (std::size_t j = 0; j < 3; ++j) {
    EXPECT_NEAR(ws[j], wr[j], 1e-14);
    EXPECT_NEAR(ws[j], expectation(pure(psi), projector(l, "O", j)), 1e-14);
  }
}

}  // namespace
}  // namespace dualsim
