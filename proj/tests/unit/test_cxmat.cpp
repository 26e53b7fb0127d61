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

#include "aquo/cxmat.hpp"
#include "aquo/tree.hpp"
#include "test_support.hpp"

namespace aquo {
namespace {

using testing::random_gaussian;
using testing::random_hermitian;

ComplexMatrix diag(std::initializer_list<double> v) {
  RealVector d(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) d(i++) = x;
  return d.cast<cplx>().asDiagonal();
}

TEST(EigHermitian, DiagonalInputSortsAscending) {
  const EigenDecomposition ed = eig_hermitian(diag({3, 1}));
  EXPECT_NEAR(ed.eigenvalues(0), 1.0, 1e-15);
  EXPECT_NEAR(ed.eigenvalues(1), 3.0, 1e-15);
  EXPECT_NEAR(std::abs(ed.eigenvectors(1, 0)), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(ed.eigenvectors(0, 1)), 1.0, 1e-15);
}

TEST(EigHermitian, IdentityHasUnitSpectrum) {
  const EigenDecomposition ed = eig_hermitian(ComplexMatrix::Identity(4, 4));
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(ed.eigenvalues(i), 1.0, 1e-15);
}

TEST(EigHermitian, RandomReconstructionAndOrthonormality) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const ComplexMatrix h = random_hermitian(6, rng);
    const EigenDecomposition ed = eig_hermitian(h);
    const double scale = spectral_norm(h);
    EXPECT_MAT_NEAR(ed.reconstruct(), h, 1e-10 * scale);
    EXPECT_MAT_NEAR(ed.eigenvectors.adjoint() * ed.eigenvectors, ComplexMatrix::Identity(6, 6), 1e-10);
    for (int i = 1; i < 6; ++i) EXPECT_LE(ed.eigenvalues(i - 1), ed.eigenvalues(i));
  }
}

TEST(EigHermitian, Deterministic) {
  std::mt19937_64 rng(3);
  const ComplexMatrix h = random_hermitian(5, rng);
  const EigenDecomposition a = eig_hermitian(h);
  const EigenDecomposition b = eig_hermitian(h);
  EXPECT_EQ(a.eigenvalues, b.eigenvalues);
  EXPECT_EQ(a.eigenvectors, b.eigenvectors);
}

TEST(EigHermitian, Errors) {
  EXPECT_AQUO_ERROR(eig_hermitian(ComplexMatrix::Zero(2, 3)), NotSquare);
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 1) = 1.0;
  EXPECT_AQUO_ERROR(eig_hermitian(m), NotHermitian);
  m(0, 1) = NAN;
  EXPECT_AQUO_ERROR(eig_hermitian(m), NonFinite);
}

TEST(SqrtPsd, Examples) {
  EXPECT_MAT_NEAR(sqrt_psd(diag({4, 9})), diag({2, 3}), 1e-14);
  EXPECT_MAT_NEAR(sqrt_psd(ComplexMatrix::Identity(5, 5)), ComplexMatrix::Identity(5, 5), 1e-14);
}

TEST(SqrtPsd, SquaresBackToInput) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const ComplexMatrix b = random_gaussian(5, 3, rng);  // rank deficient
    const ComplexMatrix a = b * b.adjoint();
    const ComplexMatrix r = sqrt_psd(a);
    EXPECT_MAT_NEAR(r * r, a, 1e-9 * spectral_norm(a));
    EXPECT_MAT_NEAR(r, r.adjoint(), 1e-12);
    EXPECT_GE(eig_hermitian(r).eigenvalues(0), -1e-9);
  }
}

TEST(SqrtPsd, ClampsDustButRejectsNegative) {
  EXPECT_NO_THROW(sqrt_psd(diag({1, -1e-12})));
  EXPECT_AQUO_ERROR(sqrt_psd(diag({1, -1e-6})), NegativeEigenvalue);
}

TEST(RegInverse, Examples) {
  EXPECT_MAT_NEAR(reg_inverse(diag({2, 4}), 0.0), diag({0.5, 0.25}), 1e-15);
  const ComplexMatrix r = reg_inverse(diag({1, 0}), 1e-9);
  EXPECT_NEAR(r(0, 0).real(), 1.0 / (1.0 + 1e-9), 1e-15);
  EXPECT_NEAR(r(1, 1).real(), 1e9, 1e-3);
}

TEST(RegInverse, ResidualForRandomMatrices) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const ComplexMatrix m = random_gaussian(5, 5, rng);
    EXPECT_MAT_NEAR(reg_inverse(m, 0.0) * m, ComplexMatrix::Identity(5, 5), 1e-9);
    const double eps = 0.01 * (trial + 1);
    const ComplexMatrix shifted = m + eps * ComplexMatrix::Identity(5, 5);
    EXPECT_MAT_NEAR(reg_inverse(m, eps) * shifted, ComplexMatrix::Identity(5, 5), 1e-9);
  }
}

TEST(RegInverse, SingularWithoutRegularization) {
  EXPECT_AQUO_ERROR(reg_inverse(diag({1, 0}), 0.0), Singular);
  EXPECT_AQUO_ERROR(reg_inverse(diag({1, 1}), -1.0), BadParameter);
}

TEST(Expm, Examples) {
  EXPECT_MAT_NEAR(expm(ComplexMatrix::Zero(3, 3)), ComplexMatrix::Identity(3, 3), 1e-15);
  EXPECT_MAT_NEAR(expm(diag({std::log(2.0), 0})), diag({2, 1}), 1e-14);
}

TEST(Expm, AntiHermitianGivesUnitary) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    const ComplexMatrix g = kI * random_hermitian(6, rng);
    const ComplexMatrix u = expm(g);
    EXPECT_MAT_NEAR(u * u.adjoint(), ComplexMatrix::Identity(6, 6), 1e-9);
    EXPECT_MAT_NEAR(u, testing::reference_expm(g), 1e-9);
  }
}

TEST(Expm, GeneralMatricesMatchTaylorOracle) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    const ComplexMatrix m = random_gaussian(5, 5, rng);
    EXPECT_MAT_NEAR(expm(m), testing::reference_expm(m), 1e-9 * testing::reference_expm(m).norm());
  }
}

TEST(Expm, CommutingSumFactorizes) {
  std::mt19937_64 rng(19);
  const ComplexMatrix v = random_unitary(4, rng);
  const ComplexMatrix a = v * diag({0.3, -1.2, 0.7, 0.1}) * v.adjoint();
  const ComplexMatrix b = v * diag({1.1, 0.4, -0.5, 0.9}) * v.adjoint();
  EXPECT_MAT_NEAR(expm(a + b), expm(a) * expm(b), 1e-9);
  // non-Hermitian co-diagonal pair
  const ComplexMatrix c = b * kI + a;
  EXPECT_MAT_NEAR(expm(a + c), expm(a) * expm(c), 1e-9);
}

TEST(CompleteIsometry, Examples) {
  ComplexMatrix e0 = ComplexMatrix::Zero(2, 1);
  e0(0) = 1.0;
  EXPECT_MAT_NEAR(complete_isometry(e0), ComplexMatrix::Identity(2, 2), 0.0);
  ComplexMatrix e1 = ComplexMatrix::Zero(2, 1);
  e1(1) = 1.0;
  const ComplexMatrix u = complete_isometry(e1);
  EXPECT_EQ(u(0, 1), cplx(1.0));
  EXPECT_EQ(u(1, 1), cplx(0.0));
}

TEST(CompleteIsometry, RandomIsometryIsPreserved) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    const ComplexMatrix v = random_unitary(8, rng).leftCols(4);
    const ComplexMatrix u = complete_isometry(v);
    EXPECT_TRUE(is_unitary(u, 1e-9));
    EXPECT_EQ(ComplexMatrix(u.leftCols(4)), v);
  }
}

TEST(CompleteIsometry, RejectsNonOrthonormal) {
  ComplexMatrix v = ComplexMatrix::Ones(3, 1);
  EXPECT_AQUO_ERROR(complete_isometry(v), NotIsometry);
  EXPECT_AQUO_ERROR(complete_isometry(ComplexMatrix::Identity(2, 3)), NotIsometry);
}

TEST(TraceNorm, Examples) {
  EXPECT_NEAR(trace_norm(diag({1, -2})), 3.0, 1e-14);
  std::mt19937_64 rng(29);
  EXPECT_NEAR(trace_norm(random_unitary(5, rng)), 5.0, 1e-12);
}

TEST(TraceNorm, MatchesEigenvaluesOfGram) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    const ComplexMatrix m = random_gaussian(5, 5, rng);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m.adjoint() * m);
    const double oracle = es.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
    EXPECT_NEAR(trace_norm(m), oracle, 1e-9);
  }
}

TEST(TraceNorm, UnitarilyInvariant) {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 10; ++trial) {
    const ComplexMatrix m = random_gaussian(4, 4, rng);
    const ComplexMatrix u = random_unitary(4, rng);
    const ComplexMatrix v = random_unitary(4, rng);
    EXPECT_NEAR(trace_norm(u * m * v), trace_norm(m), 1e-9);
  }
}

TEST(VonNeumannEntropy, Examples) {
  EXPECT_NEAR(von_neumann_entropy(diag({1, 0})), 0.0, 1e-14);
  EXPECT_NEAR(von_neumann_entropy(ComplexMatrix::Identity(4, 4) / 4.0), 2.0, 1e-14);
  EXPECT_NEAR(von_neumann_entropy(diag({0.5, 0.5, 0, 0})), 1.0, 1e-14);
}

TEST(VonNeumannEntropy, RejectsInvalidStates) {
  EXPECT_AQUO_ERROR(von_neumann_entropy(diag({0.5, 0.2})), NotDensityMatrix);
  EXPECT_AQUO_ERROR(von_neumann_entropy(diag({1.5, -0.5})), NotDensityMatrix);
}

TEST(Kron, BlockLayout) {
  const ComplexMatrix a = diag({1, 2});
  ComplexMatrix b = ComplexMatrix::Zero(2, 2);
  b(0, 1) = 1.0;
  const ComplexMatrix k = kron(a, b);
  EXPECT_EQ(k(0, 1), cplx(1.0));
  EXPECT_EQ(k(2, 3), cplx(2.0));
  EXPECT_EQ(k.cwiseAbs().sum(), 3.0);
}

TEST(OrthonormalSpan, DropsDependentColumns) {
  ComplexMatrix cols(3, 3);
  cols << 1, 1, 0, 0, 0, 1, 0, 0, 0;
  const ComplexMatrix q = orthonormal_span(cols);
  EXPECT_EQ(q.cols(), 2);
  EXPECT_MAT_NEAR(q.adjoint() * q, ComplexMatrix::Identity(2, 2), 1e-14);
}

}  // namespace
}  // namespace aquo
