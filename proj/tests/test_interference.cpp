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

#include <gtest/gtest.h>

#include "dualsim/dual.hpp"
#include "dualsim/errors.hpp"
#include "dualsim/interference.hpp"
#include "oracles.hpp"

namespace dualsim {
namespace {

Vector amps2(Complex a, Complex b) {
  Vector v(2);
  v << a, b;
  return v;
}

const MeasurementModel kModel = MeasurementModel::calibrated(2, 3);

TEST(InterferenceOperator, HermitianTracelessAndMatchesOracle) {
  const auto layout = measurement_layout(kModel);
  const auto b = interference_operator(layout);
  EXPECT_TRUE(b.op.is_hermitian());
  EXPECT_NEAR(std::abs(b.op.entries().trace()), 0.0, 1e-15);
  // |s_1 O_1⟩⟨s_2 O_2| + h.c.; flat index = s·3 + o.
  Matrix expected = Matrix::Zero(6, 6);
  expected(1, 5) = expected(5, 1) = 1.0;
  EXPECT_LT((b.op.entries() - expected).norm(), 1e-15);
}

TEST(InterferenceOperator, SquaredIsIdentityOnBranchPair) {
  const auto layout = measurement_layout(kModel);
  const auto b = interference_operator(layout);
  const Matrix b2 = (b.op * b.op).entries();
  const auto v1 = StateVector::basis(layout, {0, 1}).amplitudes();
  const auto v2 = StateVector::basis(layout, {1, 2}).amplitudes();
  EXPECT_NEAR(std::abs(v1.dot(b2 * v1) - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(v2.dot(b2 * v2) - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(v1.dot(b2 * v2)), 0.0, 1e-15);
}

TEST(InterferenceOperator, InvalidPairs) {
  const auto layout = measurement_layout(kModel);
  EXPECT_THROW(interference_operator(layout, {1, 1}), InvalidArgument);
  EXPECT_THROW(interference_operator(layout, {0, 1}), InvalidArgument);
  EXPECT_THROW(interference_operator(layout, {1, 3}), InvalidArgument);
  EXPECT_THROW(interference_operator(CompositeLayout({{"S", 2}})), InvalidArgument);
}

TEST(InterferenceOperator, ExtendsByIdentity) {
  const CompositeLayout big({{"S", 2}, {"O", 3}, {"O'", 3}});
  const auto b = interference_operator(big);
  const auto small = interference_operator(measurement_layout(kModel));
  EXPECT_LT((b.op.entries() - oracle::kron(small.op.entries(), Matrix::Identity(3, 3))).norm(), 1e-15);
}

TEST(Discriminate, MixedIsZeroPureIsOne) {
  const double r = 1.0 / std::sqrt(2.0);
  const auto psi = system_state(amps2(r, r));
  const auto pure = DensityMatrix::from_pure(run_premeasurement(psi, kModel).state);
  const auto mixed = pointer_mixture(psi, kModel);
  const auto b = interference_operator(pure.layout());
  EXPECT_NEAR(discriminate(mixed, b), 0.0, 1e-12);
  EXPECT_NEAR(discriminate(pure, b), 1.0, 1e-12);
  const auto single = DensityMatrix::from_pure(run_premeasurement(system_state(amps2(1, 0)), kModel).state);
  EXPECT_NEAR(discriminate(single, b), 0.0, 1e-15);
  EXPECT_THROW(discriminate(DensityMatrix::maximally_mixed(CompositeLayout({{"S", 6}})), b),
               LayoutMismatch);
}

TEST(Discriminate, StateAndDensityAgree) {
  std::mt19937_64 gen(41);
  const auto psi = run_premeasurement(system_state(oracle::random_vector(gen, 2)), kModel).state;
  const auto b = interference_operator(psi.layout());
  EXPECT_NEAR(discriminate(psi, b), discriminate(DensityMatrix::from_pure(psi), b), 1e-14);
}

TEST(PointerIncompatibility, Examples) {
  const auto layout = measurement_layout(kModel);
  const auto b = interference_operator(layout);
  EXPECT_NEAR(pointer_incompatibility(layout, b, {0, 1, -1}), 2.0, 1e-12);
  EXPECT_NEAR(pointer_incompatibility(layout, b, {0, 1, 1}), 0.0, 1e-12);
  EXPECT_NEAR(pointer_incompatibility(layout, b, {0, 2.5, -2.5}), 2.5 * 2.0, 1e-12);
}

// Property: B̄ on the premeasured state tracks 2|a_1 a_2| cos θ across the
// relative phase θ (the branch phases of H_I are equal and cancel).
TEST(InterferenceProperties, PhaseSensitivity) {
  std::mt19937_64 gen(42);
  std::uniform_real_distribution<double> unit(0.05, 0.95);
  for (int k = 0; k < 64; ++k) {
    const double theta = 2.0 * oracle::kPi * k / 64.0;
    const double p = unit(gen);
    const auto psi = system_state(amps2(std::sqrt(p), std::polar(std::sqrt(1.0 - p), theta)));
    const auto pre = run_premeasurement(psi, kModel);
    const auto b = interference_operator(pre.state.layout());
    const double expected = 2.0 * std::sqrt(p * (1.0 - p)) * std::cos(theta);
    EXPECT_NEAR(discriminate(pre.state, b), expected, 1e-10) << theta;
  }
}

// Property: dephasing scales B̄ by Re(offdiag_factor).
TEST(InterferenceProperties, DecoherenceDamping) {
  std::mt19937_64 gen(43);
  std::uniform_real_distribution<double> coupling(0.5, 1.5);
  EnvironmentModel env{{}, default_pointer_values(3)};
  for (int k = 0; k < 5; ++k) env.couplings.push_back(coupling(gen));
  for (int trial = 0; trial < 5; ++trial) {
    const auto pre = run_premeasurement(system_state(oracle::random_vector(gen, 2)), kModel);
    const auto full = tensor_compose(pre.state, environment_ready_state(5));
    const auto b = interference_operator(full.layout());
    const double b_pure = discriminate(full, b);
    for (double t : {0.1, 0.4, 1.2}) {
      const auto dec = run_decoherence(full, env, t);
      EXPECT_NEAR(discriminate(dec.state, b), b_pure * dec.offdiag_factor.real(), 1e-10);
    }
  }
}

// Property: perceive never touches φ_D, so B̄ is bit-identical.
TEST(InterferenceProperties, InvariantUnderPerceive) {
  std::mt19937_64 gen(44);
  for (std::uint64_t id = 0; id < 20; ++id) {
    const auto psi = system_state(oracle::random_vector(gen, 2));
    const auto rho0 = DensityMatrix::from_pure(ready_state(psi, kModel));
    const Propagator prop(build_meas_hamiltonian(kModel, rho0.layout()));
    const auto ev = evolve_dynamical(init_dual(rho0, id), prop, kModel.duration);
    CounterRng rng(5, Stream::kTest, id);
    const auto seen = perceive(ev, rng);
    const auto b = interference_operator(rho0.layout());
    EXPECT_EQ(discriminate(ev.phi_d, b), discriminate(seen.phi_d, b));
  }
}

TEST(CoherenceScore, SumsPairs) {
  const auto model = MeasurementModel::calibrated(3, 4);
  const double r = 1.0 / std::sqrt(3.0);
  Vector a(3);
  a << r, r, r;
  const auto pre = run_premeasurement(system_state(a), model);
  // Each pair contributes 2|a_i a_j| = 2/3.
  EXPECT_NEAR(coherence_score(pre.state, 3), 2.0, 1e-12);
  EXPECT_NEAR(coherence_score(pointer_mixture(system_state(a), model), 3), 0.0, 1e-12);
}

}  // namespace
}  // namespace dualsim
