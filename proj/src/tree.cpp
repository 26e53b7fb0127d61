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

#include "aquo/tree.hpp"

#include <charconv>
#include <cmath>
#include <numbers>

#include "aquo/tomography.hpp"

namespace aquo {

namespace {

int ceil_log2(std::size_t m) {
  int n = 0;
  while ((std::size_t{1} << n) < m) ++n;
  return n;
}

// Left singular vectors of x with singular value above kRankThreshold.
ComplexMatrix range_basis(const ComplexMatrix& x) {
  Eigen::JacobiSVD<ComplexMatrix> svd(x, Eigen::ComputeFullU);
  Eigen::Index r = 0;
  while (r < svd.singularValues().size() && svd.singularValues()(r) > kRankThreshold) ++r;
  return svd.matrixU().leftCols(r);
}

ComplexMatrix inverse_sqrt_pd(const ComplexMatrix& g) {
  const EigenDecomposition ed = eig_hermitian(g);
  require(ed.eigenvalues.minCoeff() > 1e-12, ErrorKind::InvalidPlan,
          "tree node is singular on its reachable subspace");
  const RealVector s = ed.eigenvalues.array().rsqrt();
  return ed.eigenvectors * s.cast<cplx>().asDiagonal() * ed.eigenvectors.adjoint();
}

// Rescales the pair on range(x) so that op0†op0 + op1†op1 is exactly the
// projector onto that range, and zeroes it elsewhere.
void polish(KrausPair& pair, const ComplexMatrix& x) {
  const auto d = x.rows();
  const ComplexMatrix q = range_basis(x);
  if (q.cols() == 0) {
    pair.first.setZero(d, d);
    pair.second.setZero(d, d);
    return;
  }
  ComplexMatrix m(2 * d, d);
  m.topRows(d) = pair.first;
  m.bottomRows(d) = pair.second;
  const ComplexMatrix mq = m * q;
  const ComplexMatrix fixed = mq * inverse_sqrt_pd(mq.adjoint() * mq) * q.adjoint();
  pair.first = fixed.topRows(d);
  pair.second = fixed.bottomRows(d);
}

ComplexMatrix diag4(double a, double b, double c, double e) {
  ComplexMatrix m = ComplexMatrix::Zero(4, 4);
  m(0, 0) = a;
  m(1, 1) = b;
  m(2, 2) = c;
  m(3, 3) = e;
  return m;
}

ComplexMatrix cyclic_shift(int d, int power) {
  ComplexMatrix s = ComplexMatrix::Zero(d, d);
  for (int j = 0; j < d; ++j) s(((j + power) % d + d) % d, j) = 1.0;
  return s;
}

void null_space(const ComplexMatrix& a, ComplexMatrix& out) {
  Eigen::JacobiSVD<ComplexMatrix> svd(a, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  Eigen::Index r = 0;
  while (r < sv.size() && sv(r) > kRankThreshold) ++r;
  out = svd.matrixV().rightCols(a.cols() - r);
}

void joint_eigenspaces(const std::vector<ComplexMatrix>& ops, std::size_t j, const ComplexMatrix& v,
                       std::vector<ComplexMatrix>& found) {
  if (v.cols() == 0) return;
  if (j == ops.size()) {
    found.push_back(v);
    return;
  }
  const ComplexMatrix& e = ops[j];
  // Eigenvalues of e on v can only come from the compression v† e v when v is
  // invariant; checking every eigenvalue of e itself covers all cases.
  Eigen::ComplexEigenSolver<ComplexMatrix> es(e, false);
  std::vector<cplx> distinct;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const cplx lam = es.eigenvalues()(i);
    bool seen = false;
    for (const cplx& mu : distinct) seen = seen || std::abs(mu - lam) <= kRankThreshold;
    if (!seen) distinct.push_back(lam);
  }
  const auto d = e.rows();
  for (const cplx& lam : distinct) {
    ComplexMatrix coeffs;
    null_space((e - lam * ComplexMatrix::Identity(d, d)) * v, coeffs);
    if (coeffs.cols() > 0) joint_eigenspaces(ops, j + 1, orthonormal_span(v * coeffs), found);
  }
}

}  // namespace

// --- TreePlan --------------------------------------------------------------------

std::string prefix_string(std::uint64_t value, int width) {
  std::string s(static_cast<std::size_t>(width), '0');
  for (int i = 0; i < width; ++i)
    if ((value >> (width - 1 - i)) & 1U) s[static_cast<std::size_t>(i)] = '1';
  return s;
}

void TreePlan::validate() const {
  require(dim > 0, ErrorKind::InvalidPlan, "plan dimension must be positive");
  require(layers >= 1 && layers <= 20, ErrorKind::InvalidPlan, "plan layer count out of range");
  std::size_t expected = 0;
  for (int len = 0; len < layers; ++len) {
    for (std::uint64_t v = 0; v < (std::uint64_t{1} << len); ++v) {
      const auto it = nodes.find(prefix_string(v, len));
      require(it != nodes.end(), ErrorKind::InvalidPlan,
              "plan is missing node '" + prefix_string(v, len) + "'");
      const auto& [a, b] = it->second;
      require(a.rows() == dim && a.cols() == dim && b.rows() == dim && b.cols() == dim,
              ErrorKind::InvalidPlan, "plan node has the wrong dimension");
      ++expected;
    }
  }
  require(nodes.size() == expected, ErrorKind::InvalidPlan, "plan has nodes beyond its layers");
}

const KrausPair& TreePlan::node(const std::string& prefix) const {
  const auto it = nodes.find(prefix);
  require(it != nodes.end(), ErrorKind::InvalidPlan, "no node at prefix '" + prefix + "'");
  return it->second;
}

TreePlan synthesize(const KrausChannel& ch, double epsilon) {
  require(ch.strict(), ErrorKind::IncompleteChannel, "synthesize: channel is not complete");
  require(epsilon > 0.0, ErrorKind::BadParameter, "synthesize: epsilon must be positive");
  const int d = ch.dim();
  require(ch.size() <= static_cast<std::size_t>(d) * static_cast<std::size_t>(d),
          ErrorKind::RankOverflow, "synthesize: more than d^2 Kraus operators");

  TreePlan plan;
  plan.dim = d;
  plan.layers = std::max(1, ceil_log2(ch.size()));
  plan.epsilon = epsilon;
  const std::size_t leaves = std::size_t{1} << plan.layers;

  std::vector<ComplexMatrix> ops(ch.ops());
  ops.resize(leaves, ComplexMatrix::Zero(d, d));
  std::vector<ComplexMatrix> grams;
  grams.reserve(leaves);
  for (const auto& e : ops) grams.push_back(e.adjoint() * e);

  std::map<std::string, ComplexMatrix> products;
  products[""] = ComplexMatrix::Identity(d, d);
  for (int len = 0; len < plan.layers; ++len) {
    const int below = plan.layers - len - 1;
    for (std::uint64_t v = 0; v < (std::uint64_t{1} << len); ++v) {
      const std::string prefix = prefix_string(v, len);
      const ComplexMatrix& x = products.at(prefix);
      KrausPair pair{ComplexMatrix::Zero(d, d), ComplexMatrix::Zero(d, d)};
      const double scale = spectral_norm(x);
      if (scale > kRankThreshold) {
        const ComplexMatrix inv = reg_inverse(x, epsilon * scale);
        ComplexMatrix* slots[2] = {&pair.first, &pair.second};
        for (std::uint64_t b = 0; b < 2; ++b) {
          const std::uint64_t child = (v << 1) | b;
          if (below == 0) {
            *slots[b] = ops[child] * inv;
          } else {
            ComplexMatrix s = ComplexMatrix::Zero(d, d);
            for (std::uint64_t k = child << below; k < (child + 1) << below; ++k) s += grams[k];
            *slots[b] = sqrt_psd(s) * inv;
          }
        }
        polish(pair, x);
      }
      products[prefix + "0"] = pair.first * x;
      products[prefix + "1"] = pair.second * x;
      plan.nodes.emplace(prefix, std::move(pair));
    }
  }
  return plan;
}

ComplexMatrix ancestor_product(const TreePlan& plan, const std::string& prefix) {
  require(static_cast<int>(prefix.size()) <= plan.layers, ErrorKind::InvalidPlan,
          "prefix longer than the tree");
  ComplexMatrix x = ComplexMatrix::Identity(plan.dim, plan.dim);
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    const KrausPair& pair = plan.node(prefix.substr(0, i));
    require(prefix[i] == '0' || prefix[i] == '1', ErrorKind::InvalidPlan, "prefix must be binary");
    x = (prefix[i] == '0' ? pair.first : pair.second) * x;
  }
  return x;
}

ComplexMatrix reachable_projector(const TreePlan& plan, const std::string& prefix) {
  const ComplexMatrix q = range_basis(ancestor_product(plan, prefix));
  return q * q.adjoint();
}

double node_residual(const TreePlan& plan, const std::string& prefix) {
  const KrausPair& pair = plan.node(prefix);
  const ComplexMatrix s = pair.first.adjoint() * pair.first + pair.second.adjoint() * pair.second;
  return spectral_norm(s - reachable_projector(plan, prefix));
}

KrausChannel recompose(const TreePlan& plan) {
  plan.validate();
  const std::uint64_t leaves = std::uint64_t{1} << plan.layers;
  std::vector<ComplexMatrix> ops;
  ops.reserve(leaves);
  for (std::uint64_t k = 0; k < leaves; ++k)
    ops.push_back(ancestor_product(plan, prefix_string(k, plan.layers)));
  KrausChannel probe(ops, "tree", Normalization::Approximate);
  const Normalization norm =
      check_completeness(probe) < kCompletenessTol ? Normalization::Strict : Normalization::Approximate;
  return KrausChannel(std::move(ops), "tree", norm);
}

std::map<std::string, AncillaUnitary> plan_to_unitaries(const TreePlan& plan) {
  plan.validate();
  std::map<std::string, AncillaUnitary> out;
  for (const auto& [prefix, pair] : plan.nodes)
    out.emplace(prefix, dilate_partial(pair.first, pair.second, reachable_projector(plan, prefix)));
  return out;
}

// --- named channels ------------------------------------------------------------------

NamedChannelId parse_named_channel(std::string_view text) {
  const auto colon = text.find(':');
  const std::string_view head = text.substr(0, colon);
  std::vector<std::string_view> args;
  for (auto rest = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
       !rest.empty();) {
    const auto c = rest.find(':');
    args.push_back(rest.substr(0, c));
    rest = c == std::string_view::npos ? std::string_view{} : rest.substr(c + 1);
  }
  auto number = [&](std::size_t i) {
    require(i < args.size(), ErrorKind::BadParameter, "named channel '" + std::string(text) +
                                                         "' is missing a parameter");
    double v = 0.0;
    const auto* first = args[i].data();
    const auto* last = first + args[i].size();
    const auto res = std::from_chars(first, last, v);
    require(res.ec == std::errc() && res.ptr == last, ErrorKind::BadParameter,
            "bad number in named channel '" + std::string(text) + "'");
    return v;
  };
  NamedChannelId id;
  if (head == "odd_parity") {
    id = NamedChannelId::odd_parity();
  } else if (head == "tpd") {
    id = NamedChannelId::tpd(number(0));
  } else if (head == "sio2") {
    id = NamedChannelId::sio2();
  } else if (head == "sio4") {
    id = NamedChannelId::sio4();
  } else if (head == "mms") {
    id = NamedChannelId::mms();
  } else if (head == "sic") {
    id = NamedChannelId::sic(static_cast<int>(number(0)));
  } else if (head == "depol") {
    id = NamedChannelId::depolarize(number(0), args.size() > 1 ? static_cast<int>(number(1)) : 4);
  } else {
    throw Error(ErrorKind::BadParameter, "unknown named channel '" + std::string(text) + "'");
  }
  return id;
}

std::string to_string(const NamedChannelId& id) {
  switch (id.kind) {
    case NamedKind::OddParityStab: return "odd_parity";
    case NamedKind::TwoPhotonDissipation: return "tpd:" + std::to_string(id.param);
    case NamedKind::Sio2: return "sio2";
    case NamedKind::Sio4: return "sio4";
    case NamedKind::MmsPrep: return "mms";
    case NamedKind::SicPovmTree: return "sic:" + std::to_string(id.dim);
    case NamedKind::Depolarize:
      return "depol:" + std::to_string(id.param) + ":" + std::to_string(id.dim);
  }
  return "unknown";
}

KrausChannel named_channel(const NamedChannelId& id) {
  switch (id.kind) {
    case NamedKind::OddParityStab: {
      ComplexMatrix e1 = ComplexMatrix::Zero(4, 4);
      e1(1, 0) = 1.0;
      e1(3, 2) = 1.0;
      return KrausChannel({diag4(0, 1, 0, 1), e1}, "odd_parity");
    }
    case NamedKind::TwoPhotonDissipation: {
      const double kt = id.param;
      require(kt >= 0.0 && std::isfinite(kt), ErrorKind::BadParameter,
              "two-photon dissipation needs kappa * t_int >= 0");
      ComplexMatrix e1 = ComplexMatrix::Zero(4, 4);
      e1(0, 2) = std::sqrt(-std::expm1(-2.0 * kt));
      e1(1, 3) = std::sqrt(-std::expm1(-6.0 * kt));
      return KrausChannel({diag4(1, 1, std::exp(-kt), std::exp(-3.0 * kt)), e1}, "tpd");
    }
    case NamedKind::Sio2:
      return KrausChannel({diag4(1, 1, 0, 0), diag4(0, 0, 1, 1)}, "sio2");
    case NamedKind::Sio4:
      return KrausChannel(
          {diag4(1, 0, 0, 0), diag4(0, 1, 0, 0), diag4(0, 0, 1, 0), diag4(0, 0, 0, 1)}, "sio4");
    case NamedKind::MmsPrep: {
      KrausChannel ch = recompose(mms_prep_plan());
      return KrausChannel(ch.ops(), "mms");
    }
    case NamedKind::SicPovmTree: {
      const SicPovm sic = build_sic(id.dim);
      std::vector<ComplexMatrix> ops;
      for (const auto& m : sic.elements.elements()) ops.push_back(sqrt_psd(m));
      return KrausChannel(std::move(ops), "sic" + std::to_string(id.dim));
    }
    case NamedKind::Depolarize:
      return depolarizing_channel(id.param, id.dim);
  }
  throw Error(ErrorKind::BadParameter, "unknown named channel");
}

TreePlan mms_prep_plan() {
  const double h = std::numbers::sqrt2 / 2.0;
  const ComplexMatrix id = ComplexMatrix::Identity(4, 4);
  TreePlan plan;
  plan.dim = 4;
  plan.layers = 2;
  plan.nodes[""] = {h * id, h * id};
  plan.nodes["0"] = {h * id, h * cyclic_shift(4, 1)};
  plan.nodes["1"] = {h * cyclic_shift(4, 2), h * cyclic_shift(4, 3)};
  return plan;
}

ComplexMatrix weyl_operator(int d, int a, int b) {
  ComplexMatrix z = ComplexMatrix::Zero(d, d);
  for (int j = 0; j < d; ++j) z(j, j) = std::polar(1.0, 2.0 * std::numbers::pi * b * j / d);
  return cyclic_shift(d, a) * z;
}

KrausChannel depolarizing_channel(double p, int d) {
  require(p >= 0.0 && p <= 1.0, ErrorKind::BadParameter, "depolarization p must lie in [0, 1]");
  require(d >= 1, ErrorKind::BadParameter, "depolarization dimension must be positive");
  const double d2 = static_cast<double>(d) * d;
  std::vector<ComplexMatrix> ops;
  ops.reserve(static_cast<std::size_t>(d) * d);
  ops.push_back(std::sqrt(std::max(0.0, 1.0 - p * (d2 - 1.0) / d2)) * ComplexMatrix::Identity(d, d));
  const double c = std::sqrt(p) / d;
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      if (a != 0 || b != 0) ops.push_back(c * weyl_operator(d, a, b));
  return KrausChannel(std::move(ops), "depolarize");
}

KrausChannel depolarizing_channel_embedded(double p, int d, int n) {
  require(n >= d, ErrorKind::DimensionMismatch, "embedding dimension smaller than block");
  if (n == d) return depolarizing_channel(p, d);
  require(p >= 0.0 && p <= 1.0, ErrorKind::BadParameter, "depolarization p must lie in [0, 1]");
  std::vector<ComplexMatrix> ops;
  ops.push_back(std::sqrt(1.0 - p) * ComplexMatrix::Identity(n, n));
  ComplexMatrix q = ComplexMatrix::Zero(n, n);
  q.bottomRightCorner(n - d, n - d).setIdentity();
  ops.push_back(std::sqrt(p) * q);
  const double c = std::sqrt(p / d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      ComplexMatrix e = ComplexMatrix::Zero(n, n);
      e(i, j) = c;
      ops.push_back(std::move(e));
    }
  return KrausChannel(std::move(ops), "depolarize");
}

std::vector<ComplexVector> dark_states(const KrausChannel& ch, const ComplexMatrix& target) {
  return dark_states(ch.ops(), target);
}

std::vector<ComplexVector> dark_states(const std::vector<ComplexMatrix>& ops,
                                       const ComplexMatrix& target) {
  require(!ops.empty(), ErrorKind::InvalidChannel, "dark_states: no operators");
  const auto d = ops.front().rows();
  for (const auto& e : ops)
    require(e.rows() == d && e.cols() == d, ErrorKind::DimensionMismatch,
            "dark_states: operators must share one square dimension");
  require(target.rows() == d && target.cols() == d, ErrorKind::DimensionMismatch,
          "dark_states: target projector has the wrong dimension");
  const ComplexMatrix complement = projector_range(ComplexMatrix::Identity(d, d) - target);
  std::vector<ComplexMatrix> spaces;
  joint_eigenspaces(ops, 0, complement, spaces);
  ComplexMatrix all(d, 0);
  for (const auto& s : spaces) {
    ComplexMatrix grown(d, all.cols() + s.cols());
    grown << all, s;
    all = std::move(grown);
  }
  const ComplexMatrix basis = orthonormal_span(all);
  std::vector<ComplexVector> out;
  for (Eigen::Index c = 0; c < basis.cols(); ++c) out.emplace_back(basis.col(c));
  return out;
}

ComplexMatrix random_unitary(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  ComplexMatrix g(n, n);
  for (Eigen::Index j = 0; j < g.cols(); ++j)
    for (Eigen::Index i = 0; i < g.rows(); ++i) g(i, j) = cplx(gauss(rng), gauss(rng));
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    const cplx rjj = r(j, j);
    if (std::abs(rjj) > 0.0) q.col(j) *= rjj / std::abs(rjj);
  }
  return q;
}

KrausChannel random_channel(int dim, int rank, std::mt19937_64& rng) {
  require(dim >= 1 && rank >= 1, ErrorKind::BadParameter, "random_channel: bad dimension or rank");
  const ComplexMatrix u = random_unitary(dim * rank, rng);
  std::vector<ComplexMatrix> ops;
  ops.reserve(static_cast<std::size_t>(rank));
  for (int k = 0; k < rank; ++k) ops.push_back(u.block(k * dim, 0, dim, dim));
  return KrausChannel(std::move(ops), "random");
}

}  // namespace aquo
