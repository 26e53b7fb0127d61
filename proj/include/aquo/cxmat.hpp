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

// Dense complex linear-algebra kernel. Matrices in this project never exceed
// a few dozen rows, so everything is dense and accuracy comes before speed.

#ifndef AQUO_CXMAT_HPP
#define AQUO_CXMAT_HPP

#include <complex>

#include <Eigen/Dense>

#include "aquo/error.hpp"

namespace aquo {

using cplx = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr cplx kI{0.0, 1.0};

/// Ascending eigenvalues and orthonormal eigenvector columns of a Hermitian
/// matrix.
struct EigenDecomposition {
  RealVector eigenvalues;
  ComplexMatrix eigenvectors;

  ComplexMatrix reconstruct() const;
};

bool all_finite(const ComplexMatrix& m);
void require_finite(const ComplexMatrix& m, const char* what);

/// Largest singular value.
double spectral_norm(const ComplexMatrix& m);

/// Spectral-norm distance of m from its adjoint, relative tolerance check.
bool is_hermitian(const ComplexMatrix& m, double rel_tol = 1e-9);
bool is_unitary(const ComplexMatrix& m, double tol = 1e-9);

/// Symmetrizes (m + m†)/2 before decomposing. Throws NotSquare,
/// NotHermitian (asymmetry beyond 1e-9 x spectral norm) or NoConvergence.
EigenDecomposition eig_hermitian(const ComplexMatrix& m);

/// Principal square root of a positive semidefinite matrix. Eigenvalues
/// down to -1e-10 x spectral norm are clamped to zero; below that the input
/// is rejected with NegativeEigenvalue.
ComplexMatrix sqrt_psd(const ComplexMatrix& m);

/// Inverse of (m + epsilon I). With epsilon = 0, throws Singular when m has a
/// condition number of 1e12 or more.
ComplexMatrix reg_inverse(const ComplexMatrix& m, double epsilon);

/// Matrix exponential. Hermitian and anti-Hermitian inputs go through the
/// eigendecomposition; everything else through scaling-and-squaring Pade.
ComplexMatrix expm(const ComplexMatrix& m);

/// Extends the orthonormal columns of v to a square unitary. New columns are
/// canonical basis vectors e_0, e_1, ... orthonormalized against the columns
/// already present; candidates with residual norm below 1e-8 are skipped.
ComplexMatrix complete_isometry(const ComplexMatrix& v);

/// Sum of singular values.
double trace_norm(const ComplexMatrix& m);

/// Entropy in bits; eigenvalues below 1e-12 contribute nothing.
double von_neumann_entropy(const ComplexMatrix& rho);

/// Orthonormal basis (as columns) of the span of the given columns, built by
/// Gram-Schmidt in column order; columns with residual below tol are dropped.
ComplexMatrix orthonormal_span(const ComplexMatrix& columns, double tol = 1e-8);

/// Orthonormal basis of the range of an orthogonal projector, obtained from
/// canonical basis vectors P e_0, P e_1, ... so the result is deterministic.
ComplexMatrix projector_range(const ComplexMatrix& projector, double tol = 1e-8);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace aquo

#endif  // AQUO_CXMAT_HPP
