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

// Diamond norm of a difference of channels. With J the Choi matrix of the
// difference (input factor first),
//
//   ||Phi||_diamond = 2 max { <J, W> : 0 <= W <= rho (x) I, rho a state },
//
// posed as min <C, X> over X = diag(W, S, rho) >= 0 with W + S = rho (x) I and
// Tr rho = 1, and solved by an alternating-direction augmented Lagrangian on
// the dual. Every reported number is backed by a feasible point: the primal
// rho yields a lower bound through the purified input state, and the dual
// multiplier, shifted into feasibility, yields an upper bound.

#include <algorithm>
#include <cmath>

#include "aquo/tomography.hpp"

namespace aquo {

namespace {

// Isometric real coordinates of an n x n Hermitian matrix: the diagonal,
// then sqrt2 Re and sqrt2 Im of each strictly upper entry.
RealVector herm_vec(const ComplexMatrix& h) {
  const auto n = h.rows();
  RealVector v(n * n);
  Eigen::Index p = 0;
  for (Eigen::Index i = 0; i < n; ++i) v(p++) = h(i, i).real();
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) {
      v(p++) = std::numbers::sqrt2 * h(i, j).real();
      v(p++) = std::numbers::sqrt2 * h(i, j).imag();
    }
  return v;
}

ComplexMatrix herm_unvec(const Eigen::Ref<const RealVector>& v, Eigen::Index n) {
  ComplexMatrix h(n, n);
  Eigen::Index p = 0;
  for (Eigen::Index i = 0; i < n; ++i) h(i, i) = v(p++);
  const double s = 1.0 / std::numbers::sqrt2;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const cplx z(s * v(p), s * v(p + 1));
      p += 2;
      h(i, j) = z;
      h(j, i) = std::conj(z);
    }
  return h;
}

ComplexMatrix partial_trace_out(const ComplexMatrix& m, int d_in, int d_out) {
  ComplexMatrix r = ComplexMatrix::Zero(d_in, d_in);
  for (int i = 0; i < d_in; ++i)
    for (int j = 0; j < d_in; ++j) r(i, j) = m.block(i * d_out, j * d_out, d_out, d_out).trace();
  return r;
}

RealVector herm_eigs(const ComplexMatrix& h) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

// Positive part of a Hermitian matrix given in herm_vec coordinates.
RealVector psd_part(const Eigen::Ref<const RealVector>& v, Eigen::Index n) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(herm_unvec(v, n));
  const RealVector lam = es.eigenvalues().cwiseMax(0.0);
  return herm_vec(es.eigenvectors() * lam.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint());
}

// ||(sqrt(rho) (x) I) J (sqrt(rho) (x) I)||_1: the output trace distance for
// the purification of rho fed through the difference map.
double purified_value(const ComplexMatrix& j, ComplexMatrix rho, int d) {
  rho = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(rho);
  RealVector lam = es.eigenvalues().cwiseMax(0.0);
  const double tr = lam.sum();
  if (!(tr > 0.0)) return 0.0;
  lam /= tr;
  const ComplexMatrix root =
      es.eigenvectors() * lam.cwiseSqrt().cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
  const ComplexMatrix k = kron(root, ComplexMatrix::Identity(d, d));
  return herm_eigs(k * j * k).cwiseAbs().sum();
}

// Upper bound 2 lambda_max(Tr_out Z) for Z >= 0, Z >= J obtained by shifting
// the candidate.
double shifted_dual_value(const ComplexMatrix& j, ComplexMatrix z, int d) {
  z = 0.5 * (z + z.adjoint());
  const double shift =
      std::max({0.0, -herm_eigs(z - j).minCoeff(), -herm_eigs(z).minCoeff()});
  z += shift * ComplexMatrix::Identity(z.rows(), z.cols());
  return 2.0 * herm_eigs(partial_trace_out(z, d, d)).maxCoeff();
}

}  // namespace

DiamondResult diamond_norm_choi(const ChoiMatrix& delta, const DiamondOptions& opts) {
  const int d = delta.dim;
  const Eigen::Index big = static_cast<Eigen::Index>(d) * d;
  require(d >= 1 && delta.mat.rows() == big && delta.mat.cols() == big, ErrorKind::DimensionMismatch,
          "diamond_norm_choi: Choi matrix has the wrong size");
  require(d <= 4, ErrorKind::UnsupportedDim, "diamond distance supports d <= 4");
  require((delta.mat - delta.mat.adjoint()).cwiseAbs().maxCoeff() <= 1e-9, ErrorKind::NotHermitian,
          "diamond_norm_choi: Choi matrix of the difference is not Hermitian");
  const ComplexMatrix j = 0.5 * (delta.mat + delta.mat.adjoint());

  DiamondResult res;
  const double jnorm = herm_eigs(j).cwiseAbs().sum();
  res.upper_bound = jnorm;
  res.lower_bound = jnorm / d;
  if (jnorm <= 1e-14) {
    res.converged = true;
    return res;
  }
  const double cap = std::min(jnorm, 2.0);

  // Trivial certificates: the maximally entangled input and Z = J_+.
  res.certified_lower = purified_value(j, ComplexMatrix::Identity(d, d), d);
  {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(j);
    const RealVector pos = es.eigenvalues().cwiseMax(0.0);
    res.certified_upper = std::min(
        cap, shifted_dual_value(j, es.eigenvectors() * pos.cast<cplx>().asDiagonal() *
                                        es.eigenvectors().adjoint(), d));
  }

  // Variable layout: [vec W | vec S | vec rho].
  const Eigen::Index nb = big * big;
  const Eigen::Index nr = static_cast<Eigen::Index>(d) * d;
  const Eigen::Index nx = 2 * nb + nr;
  const Eigen::Index ny = nb + 1;

  Eigen::MatrixXd kmap(nb, nr);
  for (Eigen::Index c = 0; c < nr; ++c) {
    RealVector e = RealVector::Zero(nr);
    e(c) = 1.0;
    kmap.col(c) = herm_vec(kron(herm_unvec(e, d), ComplexMatrix::Identity(d, d)));
  }
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(ny, nx);
  a.block(0, 0, nb, nb).setIdentity();
  a.block(0, nb, nb, nb).setIdentity();
  a.block(0, 2 * nb, nb, nr) = -kmap;
  for (int i = 0; i < d; ++i) a(nb, 2 * nb + i) = 1.0;
  RealVector b = RealVector::Zero(ny);
  b(nb) = 1.0;
  RealVector c = RealVector::Zero(nx);
  c.head(nb) = -herm_vec(j);
  const Eigen::LLT<Eigen::MatrixXd> aat((a * a.transpose()).eval());

  RealVector x = RealVector::Zero(nx);
  RealVector s = RealVector::Zero(nx);
  RealVector y = RealVector::Zero(ny);
  double mu = 1.0;
  const double bnorm = 1.0 + b.norm();
  const double cnorm = 1.0 + c.norm();

  for (int it = 1; it <= opts.max_iterations; ++it) {
    y = -aat.solve(mu * (a * x - b) + a * (s - c));
    const RealVector aty = a.transpose() * y;
    const RealVector v = c - aty - mu * x;
    s.segment(0, nb) = psd_part(v.segment(0, nb), big);
    s.segment(nb, nb) = psd_part(v.segment(nb, nb), big);
    s.segment(2 * nb, nr) = psd_part(v.segment(2 * nb, nr), d);
    x = (s - v) / mu;
    res.iterations = it;

    if (it % opts.check_every != 0) continue;
    const double pinf = (a * x - b).norm() / bnorm;
    const double dinf = (aty + s - c).norm() / cnorm;
    // Balance primal and dual residuals.
    if (pinf > 5.0 * dinf) {
      mu = std::min(mu / 0.7, 1e4);
    } else if (dinf > 5.0 * pinf) {
      mu = std::max(mu * 0.7, 1e-4);
    }

    res.certified_lower =
        std::max(res.certified_lower, purified_value(j, herm_unvec(x.segment(2 * nb, nr), d), d));
    res.certified_upper = std::min(
        res.certified_upper, shifted_dual_value(j, -herm_unvec(y.head(nb), big), d));
    if (res.certified_upper - res.certified_lower <= opts.rel_gap * res.certified_upper + 1e-12) {
      res.converged = true;
      break;
    }
  }
  res.certified_lower = std::min(res.certified_lower, res.certified_upper);
  res.value = std::clamp(res.certified_upper, res.lower_bound, cap);
  return res;
}

DiamondResult diamond_distance(const KrausChannel& a, const KrausChannel& b,
                               const DiamondOptions& opts) {
  require(a.dim() == b.dim(), ErrorKind::DimensionMismatch, "diamond_distance: dimension mismatch");
  const ChoiMatrix ja = choi_of(a);
  const ChoiMatrix jb = choi_of(b);
  return diamond_norm_choi({a.dim(), ja.mat - jb.mat}, opts);
}

}  // namespace aquo
