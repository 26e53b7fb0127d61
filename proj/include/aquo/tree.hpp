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

// Binary-tree synthesis of high-rank channels from rank-2 nodes, and the
// library of named channels used by the experiments.
//
// A node is addressed by the outcome prefix that leads to it, written as a
// string of '0'/'1' with the first layer's outcome first. Leaf operator k of
// an n-layer tree sits at the path whose bits spell k in binary, most
// significant bit first.

#ifndef AQUO_TREE_HPP
#define AQUO_TREE_HPP

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "aquo/channel.hpp"
#include "aquo/dilation.hpp"

namespace aquo {

using KrausPair = std::pair<ComplexMatrix, ComplexMatrix>;

inline constexpr double kDefaultEpsilon = 1e-9;
inline constexpr double kRankThreshold = 1e-8;

struct TreePlan {
  int dim = 0;
  int layers = 0;
  double epsilon = kDefaultEpsilon;
  std::map<std::string, KrausPair> nodes;

  /// Throws InvalidPlan unless every prefix of length < layers has a node of
  /// dimension dim and no other nodes exist.
  void validate() const;
  const KrausPair& node(const std::string& prefix) const;
};

/// Binary string of `value` with `width` digits, most significant first.
std::string prefix_string(std::uint64_t value, int width);

/// Throws RankOverflow when the operator count exceeds d^2 and
/// IncompleteChannel for non-strict inputs.
TreePlan synthesize(const KrausChannel& ch, double epsilon = kDefaultEpsilon);

/// 2^layers path products; operator k follows the bits of k.
KrausChannel recompose(const TreePlan& plan);

/// Product of the node operators along the path to `prefix` (identity at the
/// root). The prefix may have any length up to layers.
ComplexMatrix ancestor_product(const TreePlan& plan, const std::string& prefix);

/// Projector onto the range of ancestor_product, singular values below 1e-8
/// dropped.
ComplexMatrix reachable_projector(const TreePlan& plan, const std::string& prefix);

/// Spectral norm of op0†op0 + op1†op1 minus the node's reachable projector.
double node_residual(const TreePlan& plan, const std::string& prefix);

std::map<std::string, AncillaUnitary> plan_to_unitaries(const TreePlan& plan);

enum class NamedKind {
  OddParityStab,
  TwoPhotonDissipation,
  Sio2,
  Sio4,
  MmsPrep,
  SicPovmTree,
  Depolarize,
};

struct NamedChannelId {
  NamedKind kind = NamedKind::OddParityStab;
  double param = 0.0;  // kappa * t_int for TPD, p for Depolarize
  int dim = 4;         // SIC and Depolarize dimension

  static NamedChannelId odd_parity() { return {NamedKind::OddParityStab, 0.0, 4}; }
  static NamedChannelId tpd(double kappa_t) { return {NamedKind::TwoPhotonDissipation, kappa_t, 4}; }
  static NamedChannelId sio2() { return {NamedKind::Sio2, 0.0, 4}; }
  static NamedChannelId sio4() { return {NamedKind::Sio4, 0.0, 4}; }
  static NamedChannelId mms() { return {NamedKind::MmsPrep, 0.0, 4}; }
  static NamedChannelId sic(int d) { return {NamedKind::SicPovmTree, 0.0, d}; }
  static NamedChannelId depolarize(double p, int d = 4) { return {NamedKind::Depolarize, p, d}; }
};

/// Accepts "odd_parity", "tpd:<kappa t>", "sio2", "sio4", "mms", "sic:<d>",
/// "depol:<p>[:<d>]".
NamedChannelId parse_named_channel(std::string_view text);
std::string to_string(const NamedChannelId& id);

KrausChannel named_channel(const NamedChannelId& id);

/// Two-layer preparation of I/4 from |0><0|: the first layer splits the run
/// into two halves, the second layer walks |0> onto one of two Fock levels by
/// cyclic shifts.
TreePlan mms_prep_plan();

/// Clock-shift operator X^a Z^b on d levels.
ComplexMatrix weyl_operator(int d, int a, int b);

/// rho -> (1 - p) rho + p I/d with d^2 Weyl Kraus operators, identity first.
KrausChannel depolarizing_channel(double p, int d);

/// Depolarization of the lowest d levels of an n-level space:
/// rho -> (1-p) rho + p [Tr(P rho) I_d/d + Q rho Q], P the block projector and
/// Q = I - P. Equals depolarizing_channel when n = d.
KrausChannel depolarizing_channel_embedded(double p, int d, int n);

/// Orthonormal basis of states outside `target` fixed or annihilated by every
/// Kraus operator. Empty when the channel has no dark state.
std::vector<ComplexVector> dark_states(const KrausChannel& ch, const ComplexMatrix& target);

/// Same analysis for a bare operator list, which need not be a channel.
std::vector<ComplexVector> dark_states(const std::vector<ComplexMatrix>& ops,
                                       const ComplexMatrix& target);

/// Channel with `rank` Kraus operators cut from a Haar-random isometry.
KrausChannel random_channel(int dim, int rank, std::mt19937_64& rng);

/// Haar-random n x n unitary.
ComplexMatrix random_unitary(int n, std::mt19937_64& rng);

}  // namespace aquo

#endif  // AQUO_TREE_HPP
