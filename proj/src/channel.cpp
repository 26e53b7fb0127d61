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

#include "aquo/channel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace aquo {

namespace {

constexpr double kMaxStep = 0.05;

ComplexMatrix gram_sum(const std::vector<ComplexMatrix>& ops) {
  ComplexMatrix s = ComplexMatrix::Zero(ops.front().cols(), ops.front().cols());
  for (const auto& e : ops) s.noalias() += e.adjoint() * e;
  return s;
}

double hermitian_max_abs_eig(const ComplexMatrix& h) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (h + h.adjoint()), Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

double hermitian_max_eig(const ComplexMatrix& h) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (h + h.adjoint()), Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

void validate_ops(const std::vector<ComplexMatrix>& ops) {
  require(!ops.empty(), ErrorKind::InvalidChannel, "channel needs at least one Kraus operator");
  const auto d = ops.front().rows();
  require(d > 0, ErrorKind::InvalidChannel, "Kraus operators must be non-empty");
  for (const auto& e : ops) {
    require(e.rows() == d && e.cols() == d, ErrorKind::DimensionMismatch,
            "Kraus operators must all be square with matching dimension");
    require_finite(e, "KrausChannel");
  }
}

}  // namespace

// --- DensityMatrix ------------------------------------------------------------

DensityMatrix::DensityMatrix(const ComplexMatrix& mat) {
  require(mat.rows() == mat.cols() && mat.rows() > 0, ErrorKind::NotDensityMatrix,
          "density matrix must be square");
  require(all_finite(mat), ErrorKind::NotDensityMatrix, "density matrix has non-finite entries");
  require((mat - mat.adjoint()).cwiseAbs().maxCoeff() <= 1e-9, ErrorKind::NotDensityMatrix,
          "density matrix is not Hermitian");
  require(std::abs(mat.trace() - 1.0) <= 1e-8, ErrorKind::NotDensityMatrix,
          "density matrix trace differs from 1");
  mat_ = 0.5 * (mat + mat.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(mat_, Eigen::EigenvaluesOnly);
  require(es.eigenvalues().minCoeff() >= -1e-8, ErrorKind::NotDensityMatrix,
          "density matrix has a negative eigenvalue");
}

DensityMatrix DensityMatrix::pure(const ComplexVector& psi) {
  const double n = psi.norm();
  require(n > 0.0, ErrorKind::NotDensityMatrix, "zero state vector");
  const ComplexVector v = psi / n;
  return DensityMatrix(v * v.adjoint());
}

DensityMatrix DensityMatrix::basis_state(int dim, int k) {
  require(k >= 0 && k < dim, ErrorKind::OutOfRange, "basis index out of range");
  ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
  m(k, k) = 1.0;
  return DensityMatrix(m);
}

DensityMatrix DensityMatrix::maximally_mixed(int dim) {
  return DensityMatrix(ComplexMatrix::Identity(dim, dim) / static_cast<double>(dim));
}

// --- KrausChannel ---------------------------------------------------------------

KrausChannel::KrausChannel(std::vector<ComplexMatrix> ops, std::string label, Normalization norm)
    : ops_(std::move(ops)), label_(std::move(label)), norm_(norm) {
  validate_ops(ops_);
  dim_ = static_cast<int>(ops_.front().rows());
  const ComplexMatrix s = gram_sum(ops_);
  switch (norm_) {
    case Normalization::Strict: {
      const double residual =
          hermitian_max_abs_eig(s - ComplexMatrix::Identity(dim_, dim_));
      require(residual < kCompletenessTol, ErrorKind::IncompleteChannel,
              "completeness residual " + std::to_string(residual) + " exceeds 1e-8");
      break;
    }
    case Normalization::SubNormalized:
      require(hermitian_max_eig(s) <= 1.0 + kCompletenessTol, ErrorKind::IncompleteChannel,
              "sub-normalized channel has sum E†E above the identity");
      break;
    case Normalization::Approximate:
      require(hermitian_max_abs_eig(s - ComplexMatrix::Identity(dim_, dim_)) < kMaxStep,
              ErrorKind::IncompleteChannel, "approximate channel is far from complete");
      break;
  }
}

KrausChannel KrausChannel::classify(std::vector<ComplexMatrix> ops, std::string label) {
  validate_ops(ops);
  const auto d = ops.front().rows();
  const ComplexMatrix s = gram_sum(ops);
  if (hermitian_max_abs_eig(s - ComplexMatrix::Identity(d, d)) < kCompletenessTol)
    return KrausChannel(std::move(ops), std::move(label), Normalization::Strict);
  return KrausChannel(std::move(ops), std::move(label), Normalization::SubNormalized);
}

// --- PovmSet ------------------------------------------------------------------------

PovmSet::PovmSet(std::vector<ComplexMatrix> elements) : elements_(std::move(elements)) {
  require(!elements_.empty(), ErrorKind::InvalidChannel, "POVM needs at least one element");
  dim_ = static_cast<int>(elements_.front().rows());
  ComplexMatrix total = ComplexMatrix::Zero(dim_, dim_);
  for (auto& m : elements_) {
    require(m.rows() == dim_ && m.cols() == dim_, ErrorKind::DimensionMismatch,
            "POVM elements must share one dimension");
    require((m - m.adjoint()).cwiseAbs().maxCoeff() <= 1e-9, ErrorKind::NotHermitian,
            "POVM element is not Hermitian");
    m = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m, Eigen::EigenvaluesOnly);
    require(es.eigenvalues().minCoeff() >= -1e-9, ErrorKind::NotPSD, "POVM element is not PSD");
    total += m;
  }
  require(hermitian_max_abs_eig(total - ComplexMatrix::Identity(dim_, dim_)) <= kCompletenessTol,
          ErrorKind::IncompleteChannel, "POVM elements do not resolve the identity");
}

// --- LindbladGenerator ---------------------------------------------------------------

LindbladGenerator::LindbladGenerator(int dim, std::vector<LindbladTerm> terms)
    : dim_(dim), terms_(std::move(terms)) {
  require(dim > 0, ErrorKind::BadParameter, "generator dimension must be positive");
  for (const auto& t : terms_) {
    require(t.rate >= 0.0 && std::isfinite(t.rate), ErrorKind::BadParameter,
            "Lindblad rates must be nonnegative");
    require(t.op.rows() == dim && t.op.cols() == dim, ErrorKind::DimensionMismatch,
            "Lindblad operator dimension mismatch");
  }
}

ComplexMatrix LindbladGenerator::rhs(const ComplexMatrix& rho) const {
  ComplexMatrix out = ComplexMatrix::Zero(dim_, dim_);
  for (const auto& t : terms_) {
    if (t.rate == 0.0) continue;
    const ComplexMatrix odo = t.op.adjoint() * t.op;
    out += t.rate * (2.0 * t.op * rho * t.op.adjoint() - odo * rho - rho * odo);
  }
  return out;
}

double LindbladGenerator::stiffness() const {
  double s = 0.0;
  for (const auto& t : terms_) {
    if (t.rate == 0.0) continue;
    s = std::max(s, t.rate * hermitian_max_abs_eig(t.op.adjoint() * t.op));
  }
  return s;
}

// --- constructors ---------------------------------------------------------------------

KrausChannel identity_channel(int dim) {
  return KrausChannel({ComplexMatrix::Identity(dim, dim)}, "identity");
}

KrausChannel unitary_channel(const ComplexMatrix& u, std::string label) {
  require(is_unitary(u), ErrorKind::NotUnitary, "unitary_channel: matrix is not unitary");
  return KrausChannel({u}, std::move(label));
}

// --- operations -----------------------------------------------------------------------

ComplexMatrix apply_map(const KrausChannel& ch, const ComplexMatrix& x) {
  require(x.rows() == ch.dim() && x.cols() == ch.dim(), ErrorKind::DimensionMismatch,
          "apply: operator dimension does not match channel");
  ComplexMatrix out = ComplexMatrix::Zero(ch.dim(), ch.dim());
  for (const auto& e : ch.ops()) out.noalias() += e * x * e.adjoint();
  return out;
}

DensityMatrix apply(const KrausChannel& ch, const DensityMatrix& rho) {
  require(ch.strict(), ErrorKind::IncompleteChannel, "apply: channel is not complete");
  require(rho.dim() == ch.dim(), ErrorKind::DimensionMismatch,
          "apply: state dimension does not match channel");
  return DensityMatrix(apply_map(ch, rho.mat()));
}

double check_completeness(const KrausChannel& ch) {
  return hermitian_max_abs_eig(gram_sum(ch.ops()) - ComplexMatrix::Identity(ch.dim(), ch.dim()));
}

KrausChannel remix(const KrausChannel& ch, const ComplexMatrix& u) {
  const auto n = static_cast<std::size_t>(u.rows());
  require(u.rows() == u.cols() && n >= ch.size(), ErrorKind::DimensionMismatch,
          "remix: unitary must be square with size >= number of Kraus operators");
  require(is_unitary(u), ErrorKind::NotUnitary, "remix: matrix is not unitary");
  std::vector<ComplexMatrix> out(n, ComplexMatrix::Zero(ch.dim(), ch.dim()));
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t j = 0; j < ch.size(); ++j)
      out[k] += u(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) * ch.op(j);
  return KrausChannel(std::move(out), ch.label(), ch.normalization());
}

ChoiMatrix choi_of(const KrausChannel& ch) {
  const int d = ch.dim();
  ComplexMatrix j = ComplexMatrix::Zero(d * d, d * d);
  ComplexVector v(d * d);
  for (const auto& e : ch.ops()) {
    // v[(i, r)] = E[r, i] so that J = sum_k v_k v_k†
    for (int i = 0; i < d; ++i)
      for (int r = 0; r < d; ++r) v(i * d + r) = e(r, i);
    j.noalias() += v * v.adjoint();
  }
  return {d, j};
}

double choi_distance(const KrausChannel& a, const KrausChannel& b) {
  require(a.dim() == b.dim(), ErrorKind::DimensionMismatch, "choi_distance: dimension mismatch");
  return (choi_of(a).mat - choi_of(b).mat).norm();
}

KrausChannel kraus_from_choi(const ChoiMatrix& choi, double tol, std::string label) {
  const int d = choi.dim;
  const EigenDecomposition ed = eig_hermitian(choi.mat);
  const double top = std::max(ed.eigenvalues.maxCoeff(), 0.0);
  std::vector<ComplexMatrix> ops;
  for (Eigen::Index k = ed.eigenvalues.size() - 1; k >= 0; --k) {
    const double mu = ed.eigenvalues(k);
    require(mu >= -1e-8 * std::max(top, 1.0), ErrorKind::NotPSD,
            "kraus_from_choi: Choi matrix is not PSD");
    if (mu <= tol * std::max(top, 1.0)) continue;
    ComplexMatrix e(d, d);
    for (int i = 0; i < d; ++i)
      for (int r = 0; r < d; ++r) e(r, i) = std::sqrt(mu) * ed.eigenvectors(i * d + r, k);
    ops.push_back(std::move(e));
  }
  if (ops.empty()) ops.push_back(ComplexMatrix::Zero(d, d));
  return KrausChannel::classify(std::move(ops), std::move(label));
}

int kraus_rank(const KrausChannel& ch, double tol) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(choi_of(ch).mat, Eigen::EigenvaluesOnly);
  const double top = es.eigenvalues().maxCoeff();
  int r = 0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    if (es.eigenvalues()(i) > tol * top) ++r;
  return r;
}

PovmSet povm_of(const KrausChannel& ch) {
  require(ch.strict(), ErrorKind::IncompleteChannel, "povm_of: channel is not complete");
  std::vector<ComplexMatrix> elements;
  elements.reserve(ch.size());
  for (const auto& e : ch.ops()) elements.push_back(e.adjoint() * e);
  return PovmSet(std::move(elements));
}

KrausChannel kraus_step_from_lindblad(const LindbladGenerator& gen, double dt) {
  require(dt > 0.0, ErrorKind::BadParameter, "kraus_step_from_lindblad: dt must be positive");
  require(gen.stiffness() * dt < kMaxStep, ErrorKind::StepTooLarge,
          "kraus_step_from_lindblad: kappa dt ||o†o|| must stay below 0.05");
  const int d = gen.dim();
  std::vector<ComplexMatrix> ops;
  ComplexMatrix nojump = ComplexMatrix::Identity(d, d);
  for (const auto& t : gen.terms()) {
    if (t.rate == 0.0) continue;
    ops.push_back(std::sqrt(2.0 * t.rate * dt) * t.op);
    nojump -= t.rate * dt * t.op.adjoint() * t.op;
  }
  ops.push_back(nojump);
  if (ops.size() == 1) return KrausChannel(std::move(ops), "lindblad-step");
  return KrausChannel(std::move(ops), "lindblad-step", Normalization::Approximate);
}

KrausChannel compose(const KrausChannel& a, const KrausChannel& b) {
  require(a.dim() == b.dim(), ErrorKind::DimensionMismatch, "compose: dimension mismatch");
  std::vector<ComplexMatrix> ops;
  ops.reserve(a.size() * b.size());
  for (const auto& bi : b.ops())
    for (const auto& aj : a.ops()) ops.push_back(bi * aj);
  Normalization norm = Normalization::Strict;
  if (!a.strict() || !b.strict()) {
    norm = (a.normalization() == Normalization::Approximate ||
            b.normalization() == Normalization::Approximate)
               ? Normalization::Approximate
               : Normalization::SubNormalized;
  }
  std::string label = b.label() + "*" + a.label();
  return KrausChannel(std::move(ops), std::move(label), norm);
}

KrausChannel embed(const KrausChannel& ch, int n) {
  const int d = ch.dim();
  require(n >= d, ErrorKind::DimensionMismatch, "embed: target dimension smaller than channel");
  if (n == d) return ch;
  std::vector<ComplexMatrix> ops;
  ops.reserve(ch.size());
  for (std::size_t j = 0; j < ch.size(); ++j) {
    ComplexMatrix e = ComplexMatrix::Zero(n, n);
    e.topLeftCorner(d, d) = ch.op(j);
    if (j == 0) e.bottomRightCorner(n - d, n - d).setIdentity();
    ops.push_back(std::move(e));
  }
  return KrausChannel(std::move(ops), ch.label(), ch.normalization());
}

double trace_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  require(a.rows() == b.rows() && a.cols() == b.cols(), ErrorKind::DimensionMismatch,
          "trace_distance: dimension mismatch");
  const ComplexMatrix diff = a - b;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (diff + diff.adjoint()),
                                                  Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

}  // namespace aquo
