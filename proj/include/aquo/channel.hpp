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

// Channel algebra: density matrices, Kraus sets, Choi matrices, POVMs and
// Lindblad generators, plus the conversions between them.

#ifndef AQUO_CHANNEL_HPP
#define AQUO_CHANNEL_HPP

#include <string>
#include <vector>

#include "aquo/cxmat.hpp"

namespace aquo {

inline constexpr double kCompletenessTol = 1e-8;

/// Hermitian, unit-trace, positive semidefinite d x d matrix.
class DensityMatrix {
 public:
  /// Validates: Hermitian within 1e-9, trace 1 within 1e-8, eigenvalues
  /// >= -1e-8. The stored matrix is the Hermitian part of the input.
  explicit DensityMatrix(const ComplexMatrix& mat);

  static DensityMatrix pure(const ComplexVector& psi);
  static DensityMatrix basis_state(int dim, int k);
  static DensityMatrix maximally_mixed(int dim);

  int dim() const { return static_cast<int>(mat_.rows()); }
  const ComplexMatrix& mat() const { return mat_; }
  ComplexVector populations_complex() const { return mat_.diagonal(); }
  RealVector populations() const { return mat_.diagonal().real(); }

 private:
  ComplexMatrix mat_;
};

/// How a Kraus set relates to the completeness relation sum E_j† E_j = I.
enum class Normalization {
  Strict,         // residual below 1e-8
  SubNormalized,  // sum E_j† E_j <= I, e.g. intermediate layers of a tree
  Approximate,    // first-order discretizations with O(dt^2) residual
};

class KrausChannel {
 public:
  KrausChannel(std::vector<ComplexMatrix> ops, std::string label = {},
               Normalization norm = Normalization::Strict);

  /// Strict when the residual allows it, otherwise sub-normalized; throws
  /// IncompleteChannel when sum E†E exceeds the identity.
  static KrausChannel classify(std::vector<ComplexMatrix> ops, std::string label = {});

  int dim() const { return dim_; }
  std::size_t size() const { return ops_.size(); }
  const std::vector<ComplexMatrix>& ops() const { return ops_; }
  const ComplexMatrix& op(std::size_t j) const { return ops_.at(j); }
  const std::string& label() const { return label_; }
  Normalization normalization() const { return norm_; }
  bool strict() const { return norm_ == Normalization::Strict; }

 private:
  int dim_ = 0;
  std::vector<ComplexMatrix> ops_;
  std::string label_;
  Normalization norm_ = Normalization::Strict;
};

/// J = sum_ij |i><j| (x) E(|i><j|); the input factor comes first.
struct ChoiMatrix {
  int dim = 0;
  ComplexMatrix mat;
};

class PovmSet {
 public:
  PovmSet() = default;
  /// Validates: every element PSD within 1e-9 and sum M_k = I within 1e-8.
  explicit PovmSet(std::vector<ComplexMatrix> elements);

  int dim() const { return dim_; }
  std::size_t size() const { return elements_.size(); }
  const std::vector<ComplexMatrix>& elements() const { return elements_; }

 private:
  int dim_ = 0;
  std::vector<ComplexMatrix> elements_;
};

struct LindbladTerm {
  double rate = 0.0;  // kappa_j, 1/time
  ComplexMatrix op;
};

/// d rho/dt = sum_j kappa_j (2 o rho o† - o†o rho - rho o†o).
class LindbladGenerator {
 public:
  LindbladGenerator(int dim, std::vector<LindbladTerm> terms);

  int dim() const { return dim_; }
  const std::vector<LindbladTerm>& terms() const { return terms_; }
  ComplexMatrix rhs(const ComplexMatrix& rho) const;
  /// max_j kappa_j ||o_j† o_j||
  double stiffness() const;

 private:
  int dim_ = 0;
  std::vector<LindbladTerm> terms_;
};

// --- constructors for common channels ------------------------------------

KrausChannel identity_channel(int dim);
KrausChannel unitary_channel(const ComplexMatrix& u, std::string label = "unitary");

// --- operations -------------------------------------------------------------

/// rho -> sum_j E_j rho E_j†. Requires a strict channel.
DensityMatrix apply(const KrausChannel& ch, const DensityMatrix& rho);

/// Raw sum_j E_j x E_j† on an arbitrary operator, whatever the normalization.
ComplexMatrix apply_map(const KrausChannel& ch, const ComplexMatrix& x);

/// Spectral norm of sum E_j† E_j - I.
double check_completeness(const KrausChannel& ch);

/// F_k = sum_j u_kj E_j, padding ch with zero operators up to u's size.
KrausChannel remix(const KrausChannel& ch, const ComplexMatrix& u);

ChoiMatrix choi_of(const KrausChannel& ch);

/// Frobenius distance of the Choi matrices; the notion of channel equality
/// used throughout, since Kraus sets are not unique.
double choi_distance(const KrausChannel& a, const KrausChannel& b);

/// Minimal Kraus set from an eigendecomposition of the Choi matrix; drops
/// eigenvalues below tol.
KrausChannel kraus_from_choi(const ChoiMatrix& choi, double tol = 1e-12, std::string label = {});

/// Kraus rank, counted as Choi eigenvalues above tol x largest.
int kraus_rank(const KrausChannel& ch, double tol = 1e-10);

PovmSet povm_of(const KrausChannel& ch);

/// First-order discretization: E_j = sqrt(2 kappa_j dt) o_j and
/// E_nojump = I - sum_j kappa_j dt o_j† o_j. Terms with zero rate are dropped.
/// Throws StepTooLarge once max kappa_j dt ||o_j† o_j|| reaches 0.05.
KrausChannel kraus_step_from_lindblad(const LindbladGenerator& gen, double dt);

/// a first, then b: operators B_i A_j at index i * |A| + j.
KrausChannel compose(const KrausChannel& a, const KrausChannel& b);

/// Extends a d-level channel to n >= d levels. The first operator acts as the
/// identity on levels >= d, all others vanish there.
KrausChannel embed(const KrausChannel& ch, int n);

/// Half the trace norm of a - b.
double trace_distance(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace aquo

#endif  // AQUO_CHANNEL_HPP
