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

#include "dualsim/errors.hpp"
#include "dualsim/selfdescription.hpp"
#include "oracles.hpp"

namespace dualsim {
namespace {

Vector amps2(Complex a, Complex b) {
  Vector v(2);
  v << a, b;
  return v;
}

const MeasurementModel kModel = MeasurementModel::calibrated(2, 3);

DensityMatrix premeasured(const Vector& a, const MeasurementModel& model = kModel) {
  return DensityMatrix::from_pure(run_premeasurement(system_state(a), model).state);
}

Matrix diag3(double a, double b, double c) {
  Matrix m = Matrix::Zero(3, 3);
  m(0, 0) = a;
  m(1, 1) = b;
  m(2, 2) = c;
  return m;
}

TEST(RestrictedState, PureEnsembleGivesBornDiagonal) {
  const auto a = amps2(std::sqrt(0.3), std::sqrt(0.7));
  const auto r = restricted_state(premeasured(a), SourceKind::kPureEnsemble);
  EXPECT_LT((r.o_density.entries() - diag3(0.0, 0.3, 0.7)).norm(), 1e-12);
  EXPECT_EQ(r.source_kind, SourceKind::kPureEnsemble);
  EXPECT_EQ(r.o_density.layout().describe(), CompositeLayout({{"O", 3}}).describe());
}

TEST(RestrictedState, MixedEnsembleGivesSameMatrix) {
  const auto a = amps2(std::sqrt(0.3), std::sqrt(0.7));
  const auto r = restricted_state(pointer_mixture(system_state(a), kModel), SourceKind::kMixedEnsemble);
  EXPECT_LT((r.o_density.entries() - diag3(0.0, 0.3, 0.7)).norm(), 1e-12);
}

TEST(RestrictedState, IndividualEventIsPointerProjector) {
  const auto r = restricted_state(individual_event_state(kModel, 1), SourceKind::kIndividualEvent);
  EXPECT_LT((r.o_density.entries() - diag3(0.0, 1.0, 0.0)).norm(), 1e-12);
  // A superposition is not an individual event.
  EXPECT_THROW(restricted_state(premeasured(amps2(0.6, 0.8)), SourceKind::kIndividualEvent),
               InvariantBreach);
  EXPECT_THROW(restricted_state(premeasured(amps2(0.6, 0.8)), SourceKind::kPureEnsemble, "X"),
               InvalidArgument);
}

TEST(PointerWeights, Examples) {
  const auto a = amps2(std::sqrt(0.3), Complex(0.0, std::sqrt(0.7)));
  const auto w = pointer_weights(restricted_state(premeasured(a), SourceKind::kPureEnsemble));
  EXPECT_NEAR(w[0], 0.0, 1e-12);
  EXPECT_NEAR(w[1], 0.3, 1e-12);
  EXPECT_NEAR(w[2], 0.7, 1e-12);

  const auto ready = DensityMatrix::from_pure(ready_state(system_state(a), kModel));
  const auto w0 = pointer_weights(restricted_state(ready, SourceKind::kPureEnsemble));
  EXPECT_NEAR(w0[0], 1.0, 1e-12);
  EXPECT_NEAR(w0[1] + w0[2], 0.0, 1e-12);

  const auto mm = DensityMatrix::maximally_mixed(CompositeLayout({{"O", 3}}));
  for (double x : pointer_weights({mm, SourceKind::kMixedEnsemble})) EXPECT_NEAR(x, 1.0 / 3.0, 1e-15);
}

TEST(Breuer, PureAndMixedIndistinguishable) {
  const auto a = amps2(std::sqrt(0.3), std::sqrt(0.7));
  const auto pure = restricted_state(premeasured(a), SourceKind::kPureEnsemble);
  const auto mixed = restricted_state(pointer_mixture(system_state(a), kModel),
                                      SourceKind::kMixedEnsemble);
  const auto d = breuer_distinguishable(pure, mixed);
  EXPECT_FALSE(d.distinguishable);
  EXPECT_LE(d.distance, 1e-12);
}

TEST(Breuer, IndividualEventDistinguishable) {
  const auto a = amps2(std::sqrt(0.3), std::sqrt(0.7));
  const auto pure = restricted_state(premeasured(a), SourceKind::kPureEnsemble);
  const auto d = breuer_distinguishable(pure, individual_restriction(3, 1));
  EXPECT_TRUE(d.distinguishable);
  EXPECT_NEAR(d.distance, 0.7, 1e-12);
  EXPECT_FALSE(breuer_distinguishable(pure, pure).distinguishable);
}

TEST(Breuer, DimensionMismatch) {
  EXPECT_THROW(breuer_distinguishable(individual_restriction(3, 1), individual_restriction(4, 1)),
               LayoutMismatch);
}

TEST(PhaseClass, Examples) {
  const double r = 1.0 / std::sqrt(2.0);
  EXPECT_TRUE(phase_class_check(system_state(amps2(r, r)), system_state(amps2(r, -r)), kModel));
  EXPECT_FALSE(phase_class_check(system_state(amps2(1, 0)), system_state(amps2(0, 1)), kModel));
  const auto psi = system_state(amps2(0.6, Complex(0.0, 0.8)));
  const auto rotated = system_state(std::polar(1.0, 0.7) * psi.amplitudes());
  EXPECT_TRUE(phase_class_check(psi, rotated, kModel));
}

// Property: R_O depends only on the moduli |a_i|.
TEST(SelfDescriptionProperties, PhaseInvariance) {
  std::mt19937_64 gen(31);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * oracle::kPi);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t s_dim = 2 + static_cast<std::size_t>(trial % 3);
    const auto model = MeasurementModel::calibrated(s_dim, s_dim + 1);
    Vector a = oracle::random_vector(gen, s_dim);
    Vector b = a;
    for (Eigen::Index k = 0; k < b.size(); ++k) b[k] *= std::polar(1.0, phase(gen));
    EXPECT_TRUE(phase_class_check(system_state(a), system_state(b), model));
    const auto ra = restricted_state(premeasured(a, model), SourceKind::kPureEnsemble);
    const auto rb = restricted_state(premeasured(b, model), SourceKind::kPureEnsemble);
    EXPECT_LE(trace_distance(ra.o_density, rb.o_density), 1e-12);
  }
}

// Property: the restriction of a convex mixture is the mixture of the
// restrictions.
TEST(SelfDescriptionProperties, RestrictionLinearity) {
  std::mt19937_64 gen(32);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const CompositeLayout l({{"S", 2}, {"O", 3}});
  for (int trial = 0; trial < 20; ++trial) {
    const auto r1 = DensityMatrix::from_entries(l, oracle::random_density(gen, 6));
    const auto r2 = DensityMatrix::from_entries(l, oracle::random_density(gen, 6));
    const double p = unit(gen);
    const auto mix = DensityMatrix::mixture({p, 1.0 - p}, {r1, r2});
    const Matrix lhs = restricted_state(mix, SourceKind::kMixedEnsemble).o_density.entries();
    const Matrix rhs =
        p * restricted_state(r1, SourceKind::kMixedEnsemble).o_density.entries() +
        (1.0 - p) * restricted_state(r2, SourceKind::kMixedEnsemble).o_density.entries();
    EXPECT_LT((lhs - rhs).norm(), 1e-12);
  }
}

// Property: pure and mixed restrictions coincide; each individual-event
// restriction differs unless some weight is 1.
TEST(SelfDescriptionProperties, BreuerPremise) {
  std::mt19937_64 gen(33);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t s_dim = 2 + static_cast<std::size_t>(trial % 3);
    const auto model = MeasurementModel::calibrated(s_dim, s_dim + 1);
    Vector a = oracle::random_vector(gen, s_dim);
    if (trial % 10 == 0) {  // include eigenstates
      a.setZero();
      a[0] = 1.0;
    }
    const auto psi = system_state(a);
    const auto pure = restricted_state(premeasured(a, model), SourceKind::kPureEnsemble);
    const auto mixed = restricted_state(pointer_mixture(psi, model), SourceKind::kMixedEnsemble);
    EXPECT_FALSE(breuer_distinguishable(pure, mixed, 1e-9).distinguishable);
    for (std::size_t b = 1; b <= s_dim; ++b) {
      const double w = std::norm(a[static_cast<Eigen::Index>(b - 1)]);
      const auto d = breuer_distinguishable(individual_restriction(model.o_dim, b), pure, 1e-9);
      EXPECT_NEAR(d.distance, 1.0 - w, 1e-12);
      EXPECT_EQ(d.distinguishable, w < 1.0 - 1e-9);
    }
  }
}

}  // namespace
}  // namespace dualsim
