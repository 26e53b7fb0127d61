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

#include "aquo/cxmat.hpp"

#include <cmath>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

namespace aquo {

namespace {

constexpr double kHermitianTol = 1e-9;
constexpr double kClampTol = 1e-10;
constexpr double kMaxCondition = 1e12;
constexpr double kIsometryTol = 1e-8;
constexpr double kCompletionResidual = 1e-8;

void require_square(const ComplexMatrix& m, const char* what) {
  require(m.rows() == m.cols() && m.rows() > 0, ErrorKind::NotSquare,
          std::string(what) + ": expected a square matrix, got " + std::to_string(m.rows()) +
              "x" + std::to_string(m.cols()));
}

// Largest |eigenvalue| of a Hermitian matrix, i.e. its spectral norm.
double hermitian_norm(const ComplexMatrix& h) {
  if (h.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

double hermitian_asymmetry(const ComplexMatrix& m) {
  // i (m - m†) is Hermitian, so its spectral norm is cheap to get.
  const ComplexMatrix skew = kI * (m - m.adjoint());
  return hermitian_norm(skew);
}

}  // namespace

ComplexMatrix EigenDecomposition::reconstruct() const {
  return eigenvectors * eigenvalues.cast<cplx>().asDiagonal() * eigenvectors.adjoint();
}

bool all_finite(const ComplexMatrix& m) {
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    const cplx z = m.data()[i];
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  }
  return true;
}

void require_finite(const ComplexMatrix& m, const char* what) {
  require(all_finite(m), ErrorKind::NonFinite, std::string(what) + ": non-finite entry");
}

double spectral_norm(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  return svd.singularValues()(0);
}

bool is_hermitian(const ComplexMatrix& m, double rel_tol) {
  if (m.rows() != m.cols()) return false;
  const double asym = hermitian_asymmetry(m);
  return asym == 0.0 || asym <= rel_tol * hermitian_norm(0.5 * (m + m.adjoint()));
}

bool is_unitary(const ComplexMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  const ComplexMatrix gram = m.adjoint() * m - ComplexMatrix::Identity(m.rows(), m.cols());
  return hermitian_norm(gram) <= tol;
}

EigenDecomposition eig_hermitian(const ComplexMatrix& m) {
  require_square(m, "eig_hermitian");
  require_finite(m, "eig_hermitian");
  const ComplexMatrix sym = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(sym);
  require(es.info() == Eigen::Success, ErrorKind::NoConvergence,
          "eig_hermitian: eigensolver did not converge");
  const double scale = es.eigenvalues().cwiseAbs().maxCoeff();
  const double asym = hermitian_asymmetry(m);
  require(asym <= kHermitianTol * scale || asym == 0.0, ErrorKind::NotHermitian,
          "eig_hermitian: asymmetry " + std::to_string(asym) + " exceeds tolerance");
  return {es.eigenvalues(), es.eigenvectors()};
}

ComplexMatrix sqrt_psd(const ComplexMatrix& m) {
  const EigenDecomposition ed = eig_hermitian(m);
  const double scale = ed.eigenvalues.cwiseAbs().maxCoeff();
  RealVector roots(ed.eigenvalues.size());
  for (Eigen::Index i = 0; i < roots.size(); ++i) {
    const double lambda = ed.eigenvalues(i);
    require(lambda >= -kClampTol * scale, ErrorKind::NegativeEigenvalue,
            "sqrt_psd: eigenvalue " + std::to_string(lambda) + " below clamp tolerance");
    roots(i) = std::sqrt(std::max(lambda, 0.0));
  }
  ComplexMatrix r = ed.eigenvectors * roots.cast<cplx>().asDiagonal() * ed.eigenvectors.adjoint();
  return 0.5 * (r + r.adjoint());
}

ComplexMatrix reg_inverse(const ComplexMatrix& m, double epsilon) {
  require_square(m, "reg_inverse");
  require(epsilon >= 0.0, ErrorKind::BadParameter, "reg_inverse: epsilon must be nonnegative");
  const ComplexMatrix shifted = m + epsilon * ComplexMatrix::Identity(m.rows(), m.cols());
  if (epsilon == 0.0) {
    Eigen::JacobiSVD<ComplexMatrix> svd(shifted);
    const RealVector& sv = svd.singularValues();
    const double smax = sv(0);
    const double smin = sv(sv.size() - 1);
    require(smax > 0.0 && smin > 0.0 && smax / smin < kMaxCondition, ErrorKind::Singular,
            "reg_inverse: matrix is numerically singular");
  }
  return shifted.partialPivLu().inverse();
}

ComplexMatrix expm(const ComplexMatrix& m) {
  require_square(m, "expm");
  require_finite(m, "expm");
  const double scale = std::max(m.cwiseAbs().maxCoeff(), 1e-300);
  const double herm_dev = (m - m.adjoint()).cwiseAbs().maxCoeff();
  const double anti_dev = (m + m.adjoint()).cwiseAbs().maxCoeff();
  if (herm_dev <= 1e-14 * scale) {
    const EigenDecomposition ed = eig_hermitian(m);
    const ComplexVector e = ed.eigenvalues.array().exp().cast<cplx>();
    return ed.eigenvectors * e.asDiagonal() * ed.eigenvectors.adjoint();
  }
  if (anti_dev <= 1e-14 * scale) {
    // m = -i H with H = i m Hermitian.
    const EigenDecomposition ed = eig_hermitian(kI * m);
    ComplexVector e(ed.eigenvalues.size());
    for (Eigen::Index i = 0; i < e.size(); ++i) e(i) = std::exp(-kI * ed.eigenvalues(i));
    return ed.eigenvectors * e.asDiagonal() * ed.eigenvectors.adjoint();
  }
  return m.exp();
}

ComplexMatrix complete_isometry(const ComplexMatrix& v) {
  const Eigen::Index n = v.rows();
  const Eigen::Index k = v.cols();
  require(n > 0 && k <= n, ErrorKind::NotIsometry, "complete_isometry: more columns than rows");
  require_finite(v, "complete_isometry");
  const ComplexMatrix gram = v.adjoint() * v - ComplexMatrix::Identity(k, k);
  require(k == 0 || gram.cwiseAbs().maxCoeff() <= kIsometryTol, ErrorKind::NotIsometry,
          "complete_isometry: input columns are not orthonormal");

  ComplexMatrix u = ComplexMatrix::Zero(n, n);
  u.leftCols(k) = v;
  Eigen::Index filled = k;
  for (Eigen::Index i = 0; i < n && filled < n; ++i) {
    ComplexVector cand = ComplexVector::Zero(n);
    cand(i) = 1.0;
    // two passes of classical Gram-Schmidt
    for (int pass = 0; pass < 2; ++pass) {
      const auto basis = u.leftCols(filled);
      cand -= basis * (basis.adjoint() * cand);
    }
    const double norm = cand.norm();
    if (norm < kCompletionResidual) continue;
    u.col(filled++) = cand / norm;
  }
  require(filled == n, ErrorKind::NotIsometry, "complete_isometry: could not complete basis");
  return u;
}

double trace_norm(const ComplexMatrix& m) {
  require_square(m, "trace_norm");
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  return svd.singularValues().sum();
}

double von_neumann_entropy(const ComplexMatrix& rho) {
  require_square(rho, "von_neumann_entropy");
  require(std::abs(rho.trace() - 1.0) <= 1e-8, ErrorKind::NotDensityMatrix,
          "von_neumann_entropy: trace differs from 1");
  EigenDecomposition ed;
  try {
    ed = eig_hermitian(rho);
  } catch (const Error& e) {
    throw Error(ErrorKind::NotDensityMatrix, std::string("von_neumann_entropy: ") + e.what());
  }
  double s = 0.0;
  for (Eigen::Index i = 0; i < ed.eigenvalues.size(); ++i) {
    const double lambda = ed.eigenvalues(i);
    require(lambda >= -1e-8, ErrorKind::NotDensityMatrix, "von_neumann_entropy: negative eigenvalue");
    if (lambda > 1e-12) s -= lambda * std::log2(lambda);
  }
  return std::max(s, 0.0);
}

ComplexMatrix orthonormal_span(const ComplexMatrix& columns, double tol) {
  const Eigen::Index n = columns.rows();
  ComplexMatrix q(n, columns.cols());
  Eigen::Index filled = 0;
  for (Eigen::Index c = 0; c < columns.cols(); ++c) {
    ComplexVector cand = columns.col(c);
    for (int pass = 0; pass < 2; ++pass) {
      const auto basis = q.leftCols(filled);
      cand -= basis * (basis.adjoint() * cand);
    }
    const double norm = cand.norm();
    if (norm < tol) continue;
    q.col(filled++) = cand / norm;
  }
  return q.leftCols(filled);
}

ComplexMatrix projector_range(const ComplexMatrix& projector, double tol) {
  require_square(projector, "projector_range");
  return orthonormal_span(projector, tol);
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace aquo
