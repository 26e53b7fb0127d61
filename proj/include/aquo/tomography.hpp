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

// State and process characterization: chi matrices in fixed operator bases,
// SIC-POVM tomography, fidelities, coherence and the diamond distance.

#ifndef AQUO_TOMOGRAPHY_HPP
#define AQUO_TOMOGRAPHY_HPP

#include <functional>
#include <string>
#include <vector>

#include "aquo/channel.hpp"

namespace aquo {

enum class BasisKind { Pauli, GellMann9, PauliPair };

/// d^2 operators with Tr(L_i† L_j) = d delta_ij, identity first.
struct OperatorBasis {
  int dim = 0;
  BasisKind kind = BasisKind::Pauli;
  std::vector<ComplexMatrix> ops;
  std::vector<std::string> labels;
};

/// d = 2: I, X, Y, Z. d = 3: the nine-element real list with antisymmetric
/// members. d = 4: two-qubit Pauli products in lexicographic order.
OperatorBasis build_basis(int d);

/// rho -> sum_mn chi_mn L_m rho L_n†
struct ChiMatrix {
  OperatorBasis basis;
  ComplexMatrix mat;
};

ChiMatrix chi_from_channel(const KrausChannel& ch, const OperatorBasis& basis);
ChiMatrix chi_from_choi(const ChoiMatrix& choi, const OperatorBasis& basis);
/// Drops chi eigenvalues below 1e-10; throws NotPSD below -1e-8.
KrausChannel channel_from_chi(const ChiMatrix& chi);

using LinearMap = std::function<ComplexMatrix(const ComplexMatrix&)>;

/// |j><j| for every j, then (|j> + |k>)/sqrt2 and (|j> + i|k>)/sqrt2 for j < k.
std::vector<ComplexMatrix> default_tomography_inputs(int d);

/// Linear-inversion process tomography from exact outputs of `map` on the
/// given inputs (defaults when empty). Throws SingularDesign when the inputs
/// do not span the operator space.
ChiMatrix process_tomography(const LinearMap& map, const OperatorBasis& basis,
                             const std::vector<ComplexMatrix>& inputs = {});

/// Same reconstruction from already measured outputs of the inputs.
ChiMatrix process_tomography_from_outputs(const std::vector<ComplexMatrix>& inputs,
                                          const std::vector<ComplexMatrix>& outputs,
                                          const OperatorBasis& basis);

/// Re chi_00, the overlap with the ideal identity process.
double chi_identity_fidelity(const ChiMatrix& chi);

/// [Tr sqrt(sqrt(a) b sqrt(a))]^2 after normalizing both to unit trace.
double avg_operation_fidelity(const ChiMatrix& a, const ChiMatrix& b);

// --- SIC-POVM --------------------------------------------------------------

struct SicPovm {
  int dim = 0;
  ComplexVector fiducial;
  std::vector<ComplexVector> states;  // displaced fiducials, index d(j-1) + (k-1)
  PovmSet elements;                   // M_k after the symmetric completeness fix
};

/// Normalized tabulated fiducial for d in {2, 3, 4}.
ComplexVector sic_fiducial(int d);

/// D_jk = e^{i pi jk/d} sum_m w^{jm} |k+m mod d><m|, w = e^{2 pi i/d}.
ComplexMatrix sic_displacement(int d, int j, int k);

SicPovm build_sic(int d);

/// p_k = Tr(M_k rho) with numerical dust above -1e-12 clipped to zero.
RealVector povm_probabilities(const PovmSet& povm, const ComplexMatrix& rho);

/// Hermitian trace-one rho solving Tr(M_k rho) = p_k in the least-squares
/// sense; may be indefinite.
ComplexMatrix linear_inversion(const SicPovm& sic, const RealVector& probs);

/// Frobenius-nearest density matrix by eigenvalue projection onto the simplex.
DensityMatrix mle_project(const ComplexMatrix& rho_linear);

struct ReconstructionResult {
  ComplexMatrix rho_linear;
  ComplexMatrix rho_mle;
  RealVector probs_raw;
  RealVector probs_fitted;
};

ReconstructionResult reconstruct(const SicPovm& sic, const RealVector& probs);

/// Probability vector projected onto the simplex, used by the
/// eigenvalue-projection step.
RealVector project_simplex(const RealVector& v);

// --- figures of merit -----------------------------------------------------

double state_fidelity(const DensityMatrix& target, const DensityMatrix& rho);

/// S(diag rho) - S(rho) in bits.
double rel_entropy_coherence(const DensityMatrix& rho);

struct DiamondOptions {
  double rel_gap = 1e-4;
  int max_iterations = 100000;
  int check_every = 25;
};

struct DiamondResult {
  double value = 0.0;          // certified upper bound, clipped to the sandwich
  double lower_bound = 0.0;    // ||J||_1 / d
  double upper_bound = 0.0;    // ||J||_1
  double certified_lower = 0.0;
  double certified_upper = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// ||a - b||_diamond for two channels on the same dimension, from the
/// semidefinite characterization over the Choi matrix of the difference.
DiamondResult diamond_distance(const KrausChannel& a, const KrausChannel& b,
                               const DiamondOptions& opts = {});

/// Same, for a Hermitian Choi matrix of a trace-annihilating map.
DiamondResult diamond_norm_choi(const ChoiMatrix& delta, const DiamondOptions& opts = {});

/// Single-shot discrimination probability 1/2 + D/4.
double succ_probability(double d_diamond);

}  // namespace aquo

#endif  // AQUO_TOMOGRAPHY_HPP
