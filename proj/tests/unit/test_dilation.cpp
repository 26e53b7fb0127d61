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

#include <gtest/gtest.h>

#include "aquo/dilation.hpp"
#include "aquo/tree.hpp"
#include "test_support.hpp"

namespace aquo {
namespace {

ComplexVector ket(int n, int k) {
  ComplexVector v = ComplexVector::Zero(n);
  v(k) = 1.0;
  return v;
}

// |a> (x) |s> in the ancilla-major layout.
ComplexVector composite(int d, int a, const ComplexVector& s) {
  ComplexVector v = ComplexVector::Zero(2 * d);
  v.segment(a * d, d) = s;
  return v;
}

ComplexMatrix diag4(double a, double b, double c, double e) {
  ComplexMatrix m = ComplexMatrix::Zero(4, 4);
  m(0, 0) = a;
  m(1, 1) = b;
  m(2, 2) = c;
  m(3, 3) = e;
  return m;
}

TEST(DilateRank2, IdentityPair) {
  const AncillaUnitary u = dilate_rank2(ComplexMatrix::Identity(3, 3), ComplexMatrix::Zero(3, 3));
  EXPECT_MAT_NEAR(u.mat(), ComplexMatrix::Identity(6, 6), 1e-15);
}

TEST(DilateRank2, FlipPair) {
  const int d = 3;
  const AncillaUnitary u = dilate_rank2(ComplexMatrix::Zero(d, d), ComplexMatrix::Identity(d, d));
  std::mt19937_64 rng(1);
  const ComplexVector psi = testing::random_pure(d, rng);
  EXPECT_MAT_NEAR(u.mat() * composite(d, 0, psi), composite(d, 1, psi), 1e-15);
  EXPECT_TRUE(is_unitary(u.mat(), 1e-9));
}

TEST(DilateRank2, OddParityAction) {
  const KrausChannel ch = named_channel(NamedChannelId::odd_parity());
  const AncillaUnitary u = dilate_rank2(ch.op(0), ch.op(1));
  EXPECT_MAT_NEAR(u.mat() * composite(4, 0, ket(4, 0)), composite(4, 1, ket(4, 1)), 1e-15);
  EXPECT_MAT_NEAR(u.mat() * composite(4, 0, ket(4, 1)), composite(4, 0, ket(4, 1)), 1e-15);
}

TEST(DilateRank2, RandomPairsRoundTripAndReproduceChannel) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 30; ++trial) {
    const int d = 2 + trial % 4;
    const KrausChannel ch = random_channel(d, 2, rng);
    const AncillaUnitary u = dilate_rank2(ch.op(0), ch.op(1));
    EXPECT_TRUE(is_unitary(u.mat(), 1e-9));
    const auto [e0, e1] = extract_rank2(u);
    EXPECT_MAT_NEAR(e0, ch.op(0), 1e-12);
    EXPECT_MAT_NEAR(e1, ch.op(1), 1e-12);
    const ComplexMatrix rho = testing::random_density(d, rng);
    EXPECT_MAT_NEAR(dilated_action(u, rho), apply_map(ch, rho), 1e-10);
    EXPECT_MAT_NEAR(dilated_branch(u, rho, 1), ch.op(1) * rho * ch.op(1).adjoint(), 1e-10);
  }
}

TEST(DilateRank2, RejectsNonContraction) {
  EXPECT_AQUO_ERROR(dilate_rank2(ComplexMatrix::Identity(2, 2), ComplexMatrix::Identity(2, 2)), NotContraction);
  EXPECT_AQUO_ERROR(dilate_rank2(ComplexMatrix::Identity(2, 2) * 0.5, ComplexMatrix::Zero(2, 2)), NotContraction);
}

TEST(DilatePartial, FullSupportMatchesRank2) {
  std::mt19937_64 rng(3);
  const KrausChannel ch = random_channel(3, 2, rng);
  const AncillaUnitary a = dilate_rank2(ch.op(0), ch.op(1));
  const AncillaUnitary b = dilate_partial(ch.op(0), ch.op(1), ComplexMatrix::Identity(3, 3));
  EXPECT_MAT_NEAR(extract_rank2(b).first, extract_rank2(a).first, 1e-12);
  EXPECT_MAT_NEAR(extract_rank2(b).second, extract_rank2(a).second, 1e-12);
}

TEST(DilatePartial, SioLayerOnLowerBlock) {
  const ComplexMatrix support = diag4(1, 1, 0, 0);
  const AncillaUnitary u = dilate_partial(diag4(1, 0, 0, 0), diag4(0, 1, 0, 0), support);
  EXPECT_TRUE(is_unitary(u.mat(), 1e-9));
  EXPECT_MAT_NEAR(u.mat() * composite(4, 0, ket(4, 0)), composite(4, 0, ket(4, 0)), 1e-12);
  EXPECT_MAT_NEAR(u.mat() * composite(4, 0, ket(4, 1)), composite(4, 1, ket(4, 1)), 1e-12);
}

TEST(DilatePartial, EmptySupportGivesIdentity) {
  const AncillaUnitary u = dilate_partial(ComplexMatrix::Zero(3, 3), ComplexMatrix::Zero(3, 3), ComplexMatrix::Zero(3, 3));
  EXPECT_MAT_NEAR(u.mat(), ComplexMatrix::Identity(6, 6), 1e-12);
}

TEST(DilatePartial, RandomSubspaceActions) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 4;
    const ComplexMatrix w = random_unitary(d, rng);
    const ComplexMatrix q = w.leftCols(2);
    const ComplexMatrix p = q * q.adjoint();
    // Kraus pair restricted to the range of p
    const KrausChannel ch = random_channel(d, 2, rng);
    const ComplexMatrix e0 = ch.op(0) * p;
    const ComplexMatrix e1 = ch.op(1) * p;
    const AncillaUnitary u = dilate_partial(e0, e1, p);
    EXPECT_TRUE(is_unitary(u.mat(), 1e-9));
    const ComplexVector psi = q * testing::random_pure(2, rng);
    const ComplexVector out = u.mat() * composite(d, 0, psi);
    EXPECT_MAT_NEAR(out.head(d), e0 * psi, 1e-10);
    EXPECT_MAT_NEAR(out.tail(d), e1 * psi, 1e-10);
  }
}

TEST(DilatePartial, Errors) {
  const ComplexMatrix p = diag4(1, 1, 0, 0);
  EXPECT_AQUO_ERROR(dilate_partial(diag4(1, 0, 0, 0), diag4(0, 1, 0, 0), diag4(1, 0.5, 0, 0)), NotProjector);
  EXPECT_AQUO_ERROR(dilate_partial(diag4(1, 0, 0, 0), diag4(0, 0, 1, 0), p), SupportMismatch);
}

TEST(ExtractRank2, Examples) {
  const AncillaUnitary id(2, ComplexMatrix::Identity(4, 4));
  EXPECT_MAT_NEAR(extract_rank2(id).first, ComplexMatrix::Identity(2, 2), 0.0);
  EXPECT_MAT_NEAR(extract_rank2(id).second, ComplexMatrix::Zero(2, 2), 0.0);

  ComplexMatrix flip = ComplexMatrix::Zero(4, 4);
  flip.topRightCorner(2, 2).setIdentity();
  flip.bottomLeftCorner(2, 2).setIdentity();
  const AncillaUnitary f(2, flip);
  EXPECT_MAT_NEAR(extract_rank2(f).first, ComplexMatrix::Zero(2, 2), 0.0);
  EXPECT_MAT_NEAR(extract_rank2(f).second, ComplexMatrix::Identity(2, 2), 0.0);
}

TEST(AncillaUnitary, Validation) {
  EXPECT_AQUO_ERROR(AncillaUnitary(2, ComplexMatrix::Identity(3, 3)), DimensionMismatch);
  EXPECT_AQUO_ERROR(AncillaUnitary(2, ComplexMatrix::Ones(4, 4)), NotUnitary);
}

}  // namespace
}  // namespace aquo
