// Copyright 2026 The aquo Authors
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

#include <gtest/gtest.h>

#include "aquo/channel.hpp"
#include "aquo/tree.hpp"
#include "test_support.hpp"

namespace aquo {
namespace {

using testing::random_density;
using testing::reference_apply;
using testing::reference_choi;

KrausChannel odd_parity() { return named_channel(NamedChannelId::odd_parity()); }

KrausChannel amplitude_pair(double gamma) {
  ComplexMatrix e0 = ComplexMatrix::Zero(2, 2);
  e0(0, 0) = 1.0;
  e0(1, 1) = std::sqrt(1.0 - gamma);
  ComplexMatrix e1 = ComplexMatrix::Zero(2, 2);
  e1(0, 1) = std::sqrt(gamma);
  return KrausChannel({e0, e1}, "amp");
}

ComplexMatrix hadamard() {
  ComplexMatrix h(2, 2);
  h << 1, 1, 1, -1;
  return h / std::sqrt(2.0);
}

TEST(DensityMatrix, Validation) {
  EXPECT_NO_THROW(DensityMatrix(ComplexMatrix::Identity(3, 3) / 3.0));
  EXPECT_AQUO_ERROR(DensityMatrix(ComplexMatrix::Identity(3, 3)), NotDensityMatrix);
  ComplexMatrix neg = ComplexMatrix::Zero(2, 2);
  neg(0, 0) = 1.5;
  neg(1, 1) = -0.5;
  EXPECT_AQUO_ERROR(DensityMatrix{neg}, NotDensityMatrix);
  ComplexMatrix skew = ComplexMatrix::Identity(2, 2) / 2.0;
  skew(0, 1) = 0.1;
  EXPECT_AQUO_ERROR(DensityMatrix{skew}, NotDensityMatrix);
  EXPECT_AQUO_ERROR(DensityMatrix::basis_state(3, 3), OutOfRange);
}

TEST(KrausChannel, RejectsMismatchedOperators) {
  EXPECT_AQUO_ERROR(KrausChannel({ComplexMatrix::Identity(2, 2), ComplexMatrix::Identity(3, 3)}),
                    DimensionMismatch);
  EXPECT_AQUO_ERROR(KrausChannel({ComplexMatrix::Identity(2, 2) * 2.0}), IncompleteChannel);
  EXPECT_AQUO_ERROR(KrausChannel(std::vector<ComplexMatrix>{}), InvalidChannel);
}

TEST(KrausChannel, ClassifyFlagsSubNormalizedSets) {
  const KrausChannel half = KrausChannel::classify({ComplexMatrix::Identity(3, 3) / 2.0});
  EXPECT_EQ(half.normalization(), Normalization::SubNormalized);
  EXPECT_AQUO_ERROR(KrausChannel::classify({ComplexMatrix::Identity(2, 2) * 1.1}), IncompleteChannel);
}

TEST(Apply, IdentityLeavesStateUnchanged) {
  std::mt19937_64 rng(1);
  const DensityMatrix rho(random_density(3, rng));
  EXPECT_MAT_NEAR(apply(identity_channel(3), rho).mat(), rho.mat(), 1e-15);
}

TEST(Apply, OddParityMapsVacuumToOnePhoton) {
  const DensityMatrix out = apply(odd_parity(), DensityMatrix::basis_state(4, 0));
  EXPECT_MAT_NEAR(out.mat(), DensityMatrix::basis_state(4, 1).mat(), 1e-15);
}

TEST(Apply, RandomChannelsPreserveTraceAndPositivity) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 30; ++trial) {
    const KrausChannel ch = random_channel(4, 1 + trial % 6, rng);
    const ComplexMatrix rho = random_density(4, rng);
    const DensityMatrix out = apply(ch, DensityMatrix(rho));
    EXPECT_NEAR(out.mat().trace().real(), 1.0, 1e-8);
    EXPECT_GE(eig_hermitian(out.mat()).eigenvalues(0), -1e-8);
    EXPECT_MAT_NEAR(out.mat(), reference_apply(ch.ops(), rho), 1e-12);
  }
}

TEST(Apply, Errors) {
  EXPECT_AQUO_ERROR(apply(identity_channel(2), DensityMatrix::basis_state(3, 0)), DimensionMismatch);
  const KrausChannel half = KrausChannel::classify({ComplexMatrix::Identity(2, 2) / 2.0});
  EXPECT_AQUO_ERROR(apply(half, DensityMatrix::basis_state(2, 0)), IncompleteChannel);
}

TEST(CheckCompleteness, Examples) {
  EXPECT_LT(check_completeness(odd_parity()), 1e-12);
  EXPECT_LT(check_completeness(named_channel(NamedChannelId::sio4())), 1e-12);
  for (int d : {2, 3, 5}) {
    const KrausChannel half = KrausChannel::classify({ComplexMatrix::Identity(d, d) / 2.0});
    EXPECT_NEAR(check_completeness(half), 0.75, 1e-15);
  }
}

TEST(Remix, IdentityKeepsOperators) {
  const KrausChannel ch = amplitude_pair(0.3);
  const KrausChannel r = remix(ch, ComplexMatrix::Identity(2, 2));
  for (std::size_t j = 0; j < 2; ++j) EXPECT_MAT_NEAR(r.op(j), ch.op(j), 0.0);
}

TEST(Remix, HadamardLeavesChoiInvariant) {
  const KrausChannel ch = amplitude_pair(0.3);
  const KrausChannel r = remix(ch, hadamard());
  EXPECT_MAT_NEAR(choi_of(r).mat, choi_of(ch).mat, 1e-10);
  EXPECT_GT(testing::max_abs_diff(r.op(0), ch.op(0)), 0.1);
}

TEST(Remix, InverseRestoresOperators) {
  std::mt19937_64 rng(3);
  const KrausChannel ch = random_channel(3, 3, rng);
  const ComplexMatrix u = random_unitary(5, rng);
  const KrausChannel back = remix(remix(ch, u), u.adjoint());
  for (std::size_t j = 0; j < ch.size(); ++j) EXPECT_MAT_NEAR(back.op(j), ch.op(j), 1e-10);
  for (std::size_t j = ch.size(); j < back.size(); ++j) EXPECT_LT(back.op(j).norm(), 1e-10);
}

TEST(Remix, ChoiInvariantForRandomUnitaries) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const KrausChannel ch = random_channel(3, 4, rng);
    const KrausChannel r = remix(ch, random_unitary(6, rng));
    EXPECT_LT(choi_distance(r, ch), 1e-10);
  }
}

TEST(Remix, Errors) {
  const KrausChannel ch = amplitude_pair(0.3);
  EXPECT_AQUO_ERROR(remix(ch, ComplexMatrix::Identity(1, 1)), DimensionMismatch);
  EXPECT_AQUO_ERROR(remix(ch, ComplexMatrix::Ones(2, 2)), NotUnitary);
}

TEST(Choi, IdentityIsTwiceBellProjector) {
  ComplexVector phi = ComplexVector::Zero(4);
  phi(0) = phi(3) = 1.0 / std::sqrt(2.0);
  EXPECT_MAT_NEAR(choi_of(identity_channel(2)).mat, 2.0 * phi * phi.adjoint(), 1e-15);
}

TEST(Choi, CompletelyDepolarizingIsScaledIdentity) {
  for (int d : {2, 3, 4}) {
    const KrausChannel ch = depolarizing_channel(1.0, d);
    EXPECT_MAT_NEAR(choi_of(ch).mat, ComplexMatrix::Identity(d * d, d * d) / d, 1e-12);
  }
}

TEST(Choi, MatchesMatrixUnitOracle) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const KrausChannel ch = random_channel(3, 1 + trial % 5, rng);
    const ChoiMatrix j = choi_of(ch);
    EXPECT_MAT_NEAR(j.mat, reference_choi(ch.ops()), 1e-12);
    // trace preservation: partial trace over the output is the identity
    ComplexMatrix tr_out = ComplexMatrix::Zero(3, 3);
    for (int i = 0; i < 3; ++i)
      for (int k = 0; k < 3; ++k) tr_out(i, k) = j.mat.block(i * 3, k * 3, 3, 3).trace();
    EXPECT_MAT_NEAR(tr_out, ComplexMatrix::Identity(3, 3), 1e-10);
  }
}

TEST(KrausFromChoi, RecoversMinimalRepresentation) {
  std::mt19937_64 rng(6);
  for (int rank : {1, 2, 5}) {
    const KrausChannel ch = random_channel(3, rank, rng);
    const KrausChannel back = kraus_from_choi(choi_of(ch));
    EXPECT_EQ(static_cast<int>(back.size()), rank);
    EXPECT_LT(choi_distance(back, ch), 1e-10);
    EXPECT_TRUE(back.strict());
    EXPECT_EQ(kraus_rank(ch), rank);
  }
}

TEST(PovmOf, Examples) {
  const PovmSet id = povm_of(identity_channel(3));
  ASSERT_EQ(id.size(), 1u);
  EXPECT_MAT_NEAR(id.elements()[0], ComplexMatrix::Identity(3, 3), 0.0);

  const PovmSet odd = povm_of(odd_parity());
  ComplexMatrix m0 = ComplexMatrix::Zero(4, 4);
  m0(1, 1) = m0(3, 3) = 1.0;
  ComplexMatrix m1 = ComplexMatrix::Zero(4, 4);
  m1(0, 0) = m1(2, 2) = 1.0;
  EXPECT_MAT_NEAR(odd.elements()[0], m0, 0.0);
  EXPECT_MAT_NEAR(odd.elements()[1], m1, 0.0);
}

TEST(PovmOf, ProbabilitiesSumToOne) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const KrausChannel ch = random_channel(4, 5, rng);
    const PovmSet povm = povm_of(ch);
    const ComplexMatrix rho = random_density(4, rng);
    double total = 0.0;
    for (const auto& m : povm.elements()) {
      total += (m * rho).trace().real();
      EXPECT_GE(eig_hermitian(m).eigenvalues(0), -1e-12);
    }
    EXPECT_NEAR(total, 1.0, 1e-10);
  }
}

TEST(PovmSet, RejectsInvalidSets) {
  EXPECT_AQUO_ERROR(PovmSet({ComplexMatrix::Identity(2, 2) / 2.0}), IncompleteChannel);
  ComplexMatrix neg = ComplexMatrix::Identity(2, 2);
  neg(1, 1) = -1.0;
  EXPECT_AQUO_ERROR(PovmSet({neg, ComplexMatrix::Identity(2, 2) - neg}), NotPSD);
}

TEST(KrausStep, SingleDecayTerm) {
  ComplexMatrix o = ComplexMatrix::Zero(2, 2);
  o(0, 1) = 1.0;
  const double kappa = 0.5;
  const double dt = 0.01;  // kappa dt = 0.005
  const KrausChannel step = kraus_step_from_lindblad(LindbladGenerator(2, {{kappa, o}}), dt);
  ASSERT_EQ(step.size(), 2u);
  EXPECT_MAT_NEAR(step.op(0), 0.1 * o, 1e-15);
  ComplexMatrix nojump = ComplexMatrix::Identity(2, 2);
  nojump(1, 1) = 1.0 - 0.005;
  EXPECT_MAT_NEAR(step.op(1), nojump, 1e-15);
}

TEST(KrausStep, ZeroRatesGiveIdentity) {
  ComplexMatrix o = ComplexMatrix::Ones(3, 3);
  const KrausChannel step = kraus_step_from_lindblad(LindbladGenerator(3, {{0.0, o}}), 0.1);
  ASSERT_EQ(step.size(), 1u);
  EXPECT_MAT_NEAR(step.op(0), ComplexMatrix::Identity(3, 3), 0.0);
  EXPECT_TRUE(step.strict());
}

TEST(KrausStep, CompletenessResidualWithinCombinedBound) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> rate(0.1, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<LindbladTerm> terms;
    for (int j = 0; j < 3; ++j) terms.push_back({rate(rng), testing::random_gaussian(3, 3, rng) / 3.0});
    const LindbladGenerator gen(3, terms);
    const double dt = 0.01 / gen.stiffness();
    const KrausChannel step = kraus_step_from_lindblad(gen, dt);
    double sum_kdt = 0.0;
    double max_norm = 0.0;
    for (const auto& t : terms) {
      sum_kdt += t.rate * dt;
      max_norm = std::max(max_norm, spectral_norm(t.op.adjoint() * t.op));
    }
    EXPECT_LE(check_completeness(step), sum_kdt * sum_kdt * max_norm * max_norm * (1.0 + 1e-9));
  }
}

TEST(KrausStep, FirstOrderConvergenceToGenerator) {
  std::mt19937_64 rng(9);
  ComplexMatrix a = ComplexMatrix::Zero(3, 3);
  a(0, 1) = 1.0;
  a(1, 2) = std::sqrt(2.0);
  const LindbladGenerator gen(3, {{0.3, a}, {0.1, a.adjoint() * a}});
  const ComplexMatrix rho = random_density(3, rng);
  const ComplexMatrix rhs = gen.rhs(rho);
  double prev = 0.0;
  for (int k = 0; k < 4; ++k) {
    const double dt = 1e-3 / std::pow(2.0, k);
    const KrausChannel step = kraus_step_from_lindblad(gen, dt);
    const double err = (((apply_map(step, rho) - rho) / dt) - rhs).norm();
    if (k > 0) EXPECT_NEAR(prev / err, 2.0, 0.05);
    prev = err;
  }
}

TEST(KrausStep, RejectsLargeSteps) {
  ComplexMatrix o = ComplexMatrix::Identity(2, 2);
  EXPECT_AQUO_ERROR(kraus_step_from_lindblad(LindbladGenerator(2, {{1.0, o}}), 0.05), StepTooLarge);
  EXPECT_AQUO_ERROR(LindbladGenerator(2, {{-1.0, o}}), BadParameter);
}

TEST(Compose, IdentityIsNeutral) {
  std::mt19937_64 rng(10);
  const KrausChannel ch = random_channel(3, 3, rng);
  EXPECT_LT(choi_distance(compose(identity_channel(3), ch), ch), 1e-12);
  EXPECT_LT(choi_distance(compose(ch, identity_channel(3)), ch), 1e-12);
}

TEST(Compose, RankAndOrdering) {
  std::mt19937_64 rng(11);
  const KrausChannel a = random_channel(2, 2, rng);
  const KrausChannel b = random_channel(2, 2, rng);
  const KrausChannel c = compose(a, b);
  EXPECT_EQ(c.size(), 4u);
  EXPECT_LE(kraus_rank(c), 4);
  EXPECT_MAT_NEAR(c.op(1), b.op(0) * a.op(1), 1e-15);
  EXPECT_MAT_NEAR(c.op(2), b.op(1) * a.op(0), 1e-15);
}

TEST(Compose, MatchesSequentialApplication) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 10; ++trial) {
    const KrausChannel a = random_channel(3, 2, rng);
    const KrausChannel b = random_channel(3, 3, rng);
    const DensityMatrix rho(random_density(3, rng));
    EXPECT_MAT_NEAR(apply(compose(a, b), rho).mat(), apply(b, apply(a, rho)).mat(), 1e-10);
  }
  EXPECT_AQUO_ERROR(compose(identity_channel(2), identity_channel(3)), DimensionMismatch);
}

TEST(Embed, ActsAsIdentityOutsideBlock) {
  const KrausChannel e = embed(odd_parity(), 6);
  EXPECT_LT(check_completeness(e), 1e-12);
  const DensityMatrix five = DensityMatrix::basis_state(6, 5);
  EXPECT_MAT_NEAR(apply(e, five).mat(), five.mat(), 0.0);
  EXPECT_MAT_NEAR(apply(e, DensityMatrix::basis_state(6, 0)).mat(), DensityMatrix::basis_state(6, 1).mat(), 0.0);
}

TEST(TraceDistance, OrthogonalStatesAreMaximallyDistant) {
  EXPECT_NEAR(trace_distance(DensityMatrix::basis_state(3, 0).mat(), DensityMatrix::basis_state(3, 2).mat()),
              1.0, 1e-15);
}

}  // namespace
}  // namespace aquo
