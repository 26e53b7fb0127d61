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

#include "aquo/dilation.hpp"

#include <string>

namespace aquo {

namespace {

constexpr double kSupportTol = 1e-8;

ComplexMatrix stack_pair(const ComplexMatrix& e0, const ComplexMatrix& e1) {
  require(e0.rows() == e0.cols() && e0.rows() > 0, ErrorKind::DimensionMismatch,
          "dilation: Kraus operators must be square");
  require(e1.rows() == e0.rows() && e1.cols() == e0.cols(), ErrorKind::DimensionMismatch,
          "dilation: Kraus operator dimensions differ");
  require_finite(e0, "dilation");
  require_finite(e1, "dilation");
  ComplexMatrix m(2 * e0.rows(), e0.cols());
  m.topRows(e0.rows()) = e0;
  m.bottomRows(e0.rows()) = e1;
  return m;
}

}  // namespace

AncillaUnitary::AncillaUnitary(int sys_dim, ComplexMatrix mat)
    : sys_dim_(sys_dim), mat_(std::move(mat)) {
  require(sys_dim > 0 && mat_.rows() == 2 * sys_dim && mat_.cols() == 2 * sys_dim,
          ErrorKind::DimensionMismatch, "AncillaUnitary must be 2d x 2d");
  require(is_unitary(mat_, 1e-9), ErrorKind::NotUnitary, "AncillaUnitary is not unitary");
}

AncillaUnitary dilate_rank2(const ComplexMatrix& e0, const ComplexMatrix& e1) {
  const ComplexMatrix m = stack_pair(e0, e1);
  const auto d = e0.rows();
  const double dev = (m.adjoint() * m - ComplexMatrix::Identity(d, d)).cwiseAbs().maxCoeff();
  require(dev <= kSupportTol, ErrorKind::NotContraction,
          "dilate_rank2: block column is not an isometry (deviation " + std::to_string(dev) + ")");
  ComplexMatrix u;
  try {
    u = complete_isometry(m);
  } catch (const Error& err) {
    throw Error(ErrorKind::NotContraction, std::string("dilate_rank2: ") + err.what());
  }
  return AncillaUnitary(static_cast<int>(d), std::move(u));
}

AncillaUnitary dilate_partial(const ComplexMatrix& e0, const ComplexMatrix& e1,
                              const ComplexMatrix& support) {
  const ComplexMatrix m = stack_pair(e0, e1);
  const auto d = e0.rows();
  require(support.rows() == d && support.cols() == d, ErrorKind::DimensionMismatch,
          "dilate_partial: support has the wrong dimension");
  require((support - support.adjoint()).cwiseAbs().maxCoeff() <= kSupportTol &&
              (support * support - support).cwiseAbs().maxCoeff() <= kSupportTol,
          ErrorKind::NotProjector, "dilate_partial: support is not an orthogonal projector");
  require((m.adjoint() * m - support).cwiseAbs().maxCoeff() <= kSupportTol,
          ErrorKind::SupportMismatch, "dilate_partial: e0†e0 + e1†e1 differs from support");

  const ComplexMatrix id = ComplexMatrix::Identity(d, d);
  const ComplexMatrix q = projector_range(support);
  const ComplexMatrix q_perp = projector_range(id - support);
  require(q.cols() + q_perp.cols() == d, ErrorKind::NotProjector,
          "dilate_partial: support rank is ill-defined");

  // Orthonormal image of the support, then canonical vectors orthogonal to it.
  const ComplexMatrix image = orthonormal_span(m * q);
  const ComplexMatrix completion = complete_isometry(image);
  const ComplexMatrix fill = completion.middleCols(image.cols(), q_perp.cols());
  const ComplexMatrix block = m * q * q.adjoint() + fill * q_perp.adjoint();

  ComplexMatrix u;
  try {
    u = complete_isometry(block);
  } catch (const Error& err) {
    throw Error(ErrorKind::SupportMismatch, std::string("dilate_partial: ") + err.what());
  }
  return AncillaUnitary(static_cast<int>(d), std::move(u));
}

std::pair<ComplexMatrix, ComplexMatrix> extract_rank2(const AncillaUnitary& u) {
  const int d = u.sys_dim();
  return {u.mat().block(0, 0, d, d), u.mat().block(d, 0, d, d)};
}

ComplexMatrix dilated_branch(const AncillaUnitary& u, const ComplexMatrix& rho, int outcome) {
  const int d = u.sys_dim();
  require(rho.rows() == d && rho.cols() == d, ErrorKind::DimensionMismatch,
          "dilated_branch: state dimension mismatch");
  require(outcome == 0 || outcome == 1, ErrorKind::OutOfRange, "ancilla outcome must be 0 or 1");
  ComplexMatrix full = ComplexMatrix::Zero(2 * d, 2 * d);
  full.topLeftCorner(d, d) = rho;
  const ComplexMatrix out = u.mat() * full * u.mat().adjoint();
  return out.block(outcome * d, outcome * d, d, d);
}

ComplexMatrix dilated_action(const AncillaUnitary& u, const ComplexMatrix& rho) {
  return dilated_branch(u, rho, 0) + dilated_branch(u, rho, 1);
}

}  // namespace aquo
