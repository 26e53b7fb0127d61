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

// Two-level ancilla dilations of rank-2 Kraus pairs.
//
// Composite ordering is ancilla (x) system with the ancilla index major:
// row a * d + s holds |a, s>, with |g> = 0 and |e> = 1. The block column
// U[:, 0:d] is therefore (e0; e1).

#ifndef AQUO_DILATION_HPP
#define AQUO_DILATION_HPP

#include <utility>

#include "aquo/channel.hpp"

namespace aquo {

class AncillaUnitary {
 public:
  /// Validates that mat is 2d x 2d and unitary within 1e-9.
  AncillaUnitary(int sys_dim, ComplexMatrix mat);

  int sys_dim() const { return sys_dim_; }
  const ComplexMatrix& mat() const { return mat_; }

 private:
  int sys_dim_ = 0;
  ComplexMatrix mat_;
};

/// e0†e0 + e1†e1 must equal I within 1e-8; the remaining d columns come from
/// complete_isometry.
AncillaUnitary dilate_rank2(const ComplexMatrix& e0, const ComplexMatrix& e1);

/// Dilation valid on the range of `support`. Requires e0†e0 + e1†e1 = support
/// within 1e-8 with support an orthogonal projector. Columns |g, c> for c
/// outside the support are filled with canonical vectors orthogonal to the
/// image of the support so the block column becomes an isometry.
AncillaUnitary dilate_partial(const ComplexMatrix& e0, const ComplexMatrix& e1,
                              const ComplexMatrix& support);

/// e_j[r, c] = <j, r| U |g, c>.
std::pair<ComplexMatrix, ComplexMatrix> extract_rank2(const AncillaUnitary& u);

/// Tr_anc[U (rho (x) |g><g|) U†] on the system.
ComplexMatrix dilated_action(const AncillaUnitary& u, const ComplexMatrix& rho);

/// Unnormalized system state after measuring the ancilla in `outcome`.
ComplexMatrix dilated_branch(const AncillaUnitary& u, const ComplexMatrix& rho, int outcome);

}  // namespace aquo

#endif  // AQUO_DILATION_HPP
