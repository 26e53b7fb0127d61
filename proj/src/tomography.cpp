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

#include "aquo/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace aquo {

namespace {

ComplexMatrix pauli(int k) {
  ComplexMatrix s = ComplexMatrix::Zero(2, 2);
  switch (k) {
    case 0: s(0, 0) = 1.0; s(1, 1) = 1.0; break;
    case 1: s(0, 1) = 1.0; s(1, 0) = 1.0; break;
    case 2: s(0, 1) = -kI; s(1, 0) = kI; break;
    default: s(0, 0) = 1.0; s(1, 1) = -1.0; break;
  }
  return s;
}

// Eigenvalues of a Hermitian matrix without the asymmetry check, for
// products that are Hermitian only up to rounding.
RealVector herm_eigenvalues(const ComplexMatrix& h) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (h + h.adjoint()), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

// Vectorization of operators matching the Choi layout: w[i * d + r] = L[r, i].
ComplexVector choi_vec(const ComplexMatrix& op) {
  const auto d = op.rows();
  ComplexVector w(d * d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index r = 0; r < d; ++r) w(i * d + r) = op(r, i);
  return w;
}

ComplexMatrix uhlmann_root_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  const ComplexMatrix ra = sqrt_psd(a);
  return ra * b * ra;
}

double uhlmann(const ComplexMatrix& a, const ComplexMatrix& b) {
  const RealVector ev = herm_eigenvalues(uhlmann_root_product(a, b));
  double s = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) s += std::sqrt(std::max(ev(i), 0.0));
  return std::clamp(s * s, 0.0, 1.0);
}

}  // namespace

// --- operator bases ----------------------------------------------------------------

OperatorBasis build_basis(int d) {
  OperatorBasis basis;
  basis.dim = d;
  if (d == 2) {
    basis.kind = BasisKind::Pauli;
    const char* names[] = {"I", "X", "Y", "Z"};
    for (int k = 0; k < 4; ++k) {
      basis.ops.push_back(pauli(k));
      basis.labels.emplace_back(names[k]);
    }
    return basis;
  }
  if (d == 3) {
    basis.kind = BasisKind::GellMann9;
    const double c = std::sqrt(1.5);
    auto unit = [](int r, int col) {
      ComplexMatrix m = ComplexMatrix::Zero(3, 3);
      m(r, col) = 1.0;
      return m;
    };
    basis.ops.push_back(ComplexMatrix::Identity(3, 3));
    basis.ops.push_back(c * (unit(0, 1) + unit(1, 0)));
    basis.ops.push_back(c * (-unit(0, 1) + unit(1, 0)));
    basis.ops.push_back(c * (unit(0, 0) - unit(1, 1)));
    basis.ops.push_back(c * (unit(0, 2) + unit(2, 0)));
    basis.ops.push_back(c * (-unit(0, 2) + unit(2, 0)));
    basis.ops.push_back(c * (unit(1, 2) + unit(2, 1)));
    basis.ops.push_back(c * (-unit(1, 2) + unit(2, 1)));
    basis.ops.push_back(std::sqrt(0.5) * (unit(0, 0) + unit(1, 1) - 2.0 * unit(2, 2)));
    for (int k = 1; k <= 9; ++k) basis.labels.push_back("L" + std::to_string(k));
    return basis;
  }
  if (d == 4) {
    basis.kind = BasisKind::PauliPair;
    const char* names = "IXYZ";
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) {
        basis.ops.push_back(kron(pauli(a), pauli(b)));
        basis.labels.push_back(std::string{names[a], names[b]});
      }
    return basis;
  }
  throw Error(ErrorKind::UnsupportedDim, "operator bases exist for d = 2, 3, 4 only");
}

// --- chi matrices ------------------------------------------------------------------------

ChiMatrix chi_from_choi(const ChoiMatrix& choi, const OperatorBasis& basis) {
  const int d = basis.dim;
  require(choi.dim == d && choi.mat.rows() == d * d, ErrorKind::DimensionMismatch,
          "chi_from_choi: Choi matrix and basis dimensions differ");
  const auto n = static_cast<Eigen::Index>(basis.ops.size());
  ComplexMatrix w(d * d, n);
  for (Eigen::Index m = 0; m < n; ++m) w.col(m) = choi_vec(basis.ops[static_cast<std::size_t>(m)]);
  ComplexMatrix chi = w.adjoint() * choi.mat * w / (static_cast<double>(d) * d);
  return {basis, 0.5 * (chi + chi.adjoint())};
}

ChiMatrix chi_from_channel(const KrausChannel& ch, const OperatorBasis& basis) {
  require(ch.dim() == basis.dim, ErrorKind::DimensionMismatch,
          "chi_from_channel: channel and basis dimensions differ");
  return chi_from_choi(choi_of(ch), basis);
}

KrausChannel channel_from_chi(const ChiMatrix& chi) {
  const int d = chi.basis.dim;
  const EigenDecomposition ed = eig_hermitian(chi.mat);
  std::vector<ComplexMatrix> ops;
  for (Eigen::Index k = ed.eigenvalues.size() - 1; k >= 0; --k) {
    const double mu = ed.eigenvalues(k);
    require(mu >= -1e-8, ErrorKind::NotPSD, "channel_from_chi: chi matrix is not PSD");
    if (mu < 1e-10) continue;
    ComplexMatrix e = ComplexMatrix::Zero(d, d);
    for (Eigen::Index m = 0; m < ed.eigenvectors.rows(); ++m)
      e += ed.eigenvectors(m, k) * chi.basis.ops[static_cast<std::size_t>(m)];
    ops.push_back(std::sqrt(mu) * e);
  }
  if (ops.empty()) ops.push_back(ComplexMatrix::Zero(d, d));
  return KrausChannel::classify(std::move(ops), "chi");
}

std::vector<ComplexMatrix> default_tomography_inputs(int d) {
  std::vector<ComplexMatrix> inputs;
  for (int j = 0; j < d; ++j) inputs.push_back(DensityMatrix::basis_state(d, j).mat());
  for (int j = 0; j < d; ++j)
    for (int k = j + 1; k < d; ++k) {
      ComplexVector plus = ComplexVector::Zero(d);
      plus(j) = 1.0;
      plus(k) = 1.0;
      ComplexVector iplus = ComplexVector::Zero(d);
      iplus(j) = 1.0;
      iplus(k) = kI;
      inputs.push_back(DensityMatrix::pure(plus).mat());
      inputs.push_back(DensityMatrix::pure(iplus).mat());
    }
  return inputs;
}

ChiMatrix process_tomography_from_outputs(const std::vector<ComplexMatrix>& inputs,
                                          const std::vector<ComplexMatrix>& outputs,
                                          const OperatorBasis& basis) {
  const int d = basis.dim;
  const Eigen::Index n = static_cast<Eigen::Index>(d) * d;
  require(static_cast<Eigen::Index>(inputs.size()) == n && outputs.size() == inputs.size(),
          ErrorKind::SingularDesign, "process_tomography: need exactly d^2 input states");
  ComplexMatrix design(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const ComplexMatrix& rho = inputs[static_cast<std::size_t>(k)];
    const ComplexMatrix& out = outputs[static_cast<std::size_t>(k)];
    require(rho.rows() == d && rho.cols() == d && out.rows() == d && out.cols() == d,
            ErrorKind::DimensionMismatch, "process_tomography: state has the wrong dimension");
    design.col(k) = rho.reshaped();
  }
  Eigen::JacobiSVD<ComplexMatrix> svd(design, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  require(sv(n - 1) > 1e-10 * sv(0), ErrorKind::SingularDesign,
          "process_tomography: input states are not linearly independent");

  // Expand each |a><b| in the inputs and assemble the Choi matrix.
  ChoiMatrix choi{d, ComplexMatrix::Zero(n, n)};
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      ComplexMatrix unit = ComplexMatrix::Zero(d, d);
      unit(a, b) = 1.0;
      const ComplexVector beta = svd.solve(ComplexVector(unit.reshaped()));
      ComplexMatrix image = ComplexMatrix::Zero(d, d);
      for (Eigen::Index k = 0; k < n; ++k) image += beta(k) * outputs[static_cast<std::size_t>(k)];
      choi.mat.block(a * d, b * d, d, d) = image;
    }
  return chi_from_choi(choi, basis);
}

ChiMatrix process_tomography(const LinearMap& map, const OperatorBasis& basis,
                             const std::vector<ComplexMatrix>& inputs_in) {
  const std::vector<ComplexMatrix> inputs =
      inputs_in.empty() ? default_tomography_inputs(basis.dim) : inputs_in;
  std::vector<ComplexMatrix> outputs;
  outputs.reserve(inputs.size());
  for (const auto& rho : inputs) outputs.push_back(map(rho));
  return process_tomography_from_outputs(inputs, outputs, basis);
}

double chi_identity_fidelity(const ChiMatrix& chi) { return chi.mat(0, 0).real(); }

double avg_operation_fidelity(const ChiMatrix& a, const ChiMatrix& b) {
  require(a.basis.dim == b.basis.dim && a.basis.kind == b.basis.kind &&
              a.mat.rows() == b.mat.rows(),
          ErrorKind::BasisMismatch, "avg_operation_fidelity: chi matrices use different bases");
  const double ta = a.mat.trace().real();
  const double tb = b.mat.trace().real();
  require(ta > 0.0 && tb > 0.0, ErrorKind::NotPSD, "avg_operation_fidelity: zero-trace chi");
  return uhlmann(a.mat / ta, b.mat / tb);
}

// --- SIC-POVM ---------------------------------------------------------------------------------

ComplexVector sic_fiducial(int d) {
  ComplexVector f(d);
  switch (d) {
    case 2:
      f << cplx(0.8881, 0.0), cplx(0.3251, -0.3250);
      break;
    case 3:
      f << cplx(0.8124, 0.0), cplx(0.1677, 0.2911), cplx(0.2386, 0.4125);
      break;
    case 4:
      f << cplx(0.2012, 0.0), cplx(-0.3076, 0.2570), cplx(0.0, 0.4857), cplx(-0.1064, 0.7427);
      break;
    default:
      throw Error(ErrorKind::UnsupportedDim, "SIC fiducials are tabulated for d = 2, 3, 4");
  }
  return f / f.norm();
}

ComplexMatrix sic_displacement(int d, int j, int k) {
  const double w = 2.0 * std::numbers::pi / d;
  ComplexMatrix op = ComplexMatrix::Zero(d, d);
  const cplx phase = std::polar(1.0, std::numbers::pi * j * k / d);
  for (int m = 0; m < d; ++m) op((k + m) % d, m) = phase * std::polar(1.0, w * j * m);
  return op;
}

SicPovm build_sic(int d) {
  SicPovm sic;
  sic.dim = d;
  sic.fiducial = sic_fiducial(d);
  for (int j = 1; j <= d; ++j)
    for (int k = 1; k <= d; ++k) sic.states.push_back(sic_displacement(d, j, k) * sic.fiducial);
  std::vector<ComplexMatrix> raw;
  ComplexMatrix total = ComplexMatrix::Zero(d, d);
  for (const auto& phi : sic.states) {
    raw.push_back(phi * phi.adjoint() / static_cast<double>(d));
    total += raw.back();
  }
  const EigenDecomposition ed = eig_hermitian(total);
  const RealVector s = ed.eigenvalues.array().rsqrt();
  const ComplexMatrix fix = ed.eigenvectors * s.cast<cplx>().asDiagonal() * ed.eigenvectors.adjoint();
  for (auto& m : raw) {
    m = fix * m * fix;
    m = 0.5 * (m + m.adjoint());
  }
  sic.elements = PovmSet(std::move(raw));
  return sic;
}

RealVector povm_probabilities(const PovmSet& povm, const ComplexMatrix& rho) {
  require(rho.rows() == povm.dim() && rho.cols() == povm.dim(), ErrorKind::DimensionMismatch,
          "povm_probabilities: state dimension differs from the POVM");
  RealVector p(static_cast<Eigen::Index>(povm.size()));
  for (std::size_t k = 0; k < povm.size(); ++k) {
    double v = (povm.elements()[k] * rho).trace().real();
    if (v < 0.0 && v > -1e-12) v = 0.0;
    p(static_cast<Eigen::Index>(k)) = v;
  }
  return p;
}

ComplexMatrix linear_inversion(const SicPovm& sic, const RealVector& probs) {
  const int d = sic.dim;
  const Eigen::Index n = static_cast<Eigen::Index>(d) * d;
  require(probs.size() == static_cast<Eigen::Index>(sic.elements.size()), ErrorKind::DimensionMismatch,
          "linear_inversion: probability count differs from the POVM size");
  require(probs.minCoeff() >= -1e-9 && std::abs(probs.sum() - 1.0) <= 1e-6, ErrorKind::BadParameter,
          "linear_inversion: probabilities must be nonnegative and sum to 1");
  // Row k maps vec(rho) (column major) to Tr(M_k rho).
  ComplexMatrix frame(probs.size(), n);
  for (Eigen::Index k = 0; k < probs.size(); ++k) {
    const ComplexMatrix mt = sic.elements.elements()[static_cast<std::size_t>(k)].transpose();
    frame.row(k) = mt.reshaped().transpose();
  }
  Eigen::JacobiSVD<ComplexMatrix> svd(frame, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  require(sv(sv.size() - 1) > 1e-10 * sv(0), ErrorKind::SingularFrame,
          "linear_inversion: measurement is not informationally complete");
  const ComplexVector x = svd.solve(ComplexVector(probs.cast<cplx>()));
  ComplexMatrix rho = x.reshaped(d, d);
  return 0.5 * (rho + rho.adjoint());
}

RealVector project_simplex(const RealVector& v) {
  std::vector<double> u(v.data(), v.data() + v.size());
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumsum = 0.0;
  double theta = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    cumsum += u[j];
    const double t = (cumsum - 1.0) / static_cast<double>(j + 1);
    if (u[j] - t > 0.0) theta = t;
  }
  return (v.array() - theta).cwiseMax(0.0);
}

DensityMatrix mle_project(const ComplexMatrix& rho_linear) {
  require(rho_linear.rows() == rho_linear.cols() && rho_linear.rows() > 0, ErrorKind::NotSquare,
          "mle_project: expected a square matrix");
  require((rho_linear - rho_linear.adjoint()).cwiseAbs().maxCoeff() <= 1e-9 *
              std::max(1.0, rho_linear.cwiseAbs().maxCoeff()),
          ErrorKind::NotHermitian, "mle_project: input is not Hermitian");
  require(std::abs(rho_linear.trace() - 1.0) <= 1e-6, ErrorKind::BadParameter,
          "mle_project: trace differs from 1");
  const EigenDecomposition ed = eig_hermitian(rho_linear);
  const RealVector lam = project_simplex(ed.eigenvalues);
  ComplexMatrix rho = ed.eigenvectors * lam.cast<cplx>().asDiagonal() * ed.eigenvectors.adjoint();
  rho = 0.5 * (rho + rho.adjoint());
  rho /= rho.trace().real();
  return DensityMatrix(rho);
}

ReconstructionResult reconstruct(const SicPovm& sic, const RealVector& probs) {
  ReconstructionResult r;
  r.probs_raw = probs;
  r.rho_linear = linear_inversion(sic, probs);
  r.rho_mle = mle_project(r.rho_linear).mat();
  r.probs_fitted = povm_probabilities(sic.elements, r.rho_mle);
  return r;
}

// --- figures of merit ---------------------------------------------------------------------

double state_fidelity(const DensityMatrix& target, const DensityMatrix& rho) {
  require(target.dim() == rho.dim(), ErrorKind::InvalidState, "state_fidelity: dimension mismatch");
  return uhlmann(target.mat(), rho.mat());
}

double rel_entropy_coherence(const DensityMatrix& rho) {
  const ComplexMatrix diag = rho.mat().diagonal().asDiagonal();
  const double c = von_neumann_entropy(diag) - von_neumann_entropy(rho.mat());
  return std::max(c, 0.0);
}

double succ_probability(double d_diamond) {
  require(d_diamond >= 0.0 && d_diamond <= 2.0 + 1e-9, ErrorKind::OutOfRange,
          "succ_probability: diamond distance must lie in [0, 2]");
  return 0.5 + 0.25 * std::min(d_diamond, 2.0);
}

}  // namespace aquo
