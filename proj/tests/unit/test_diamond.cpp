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

#include <cmath>

#include <gtest/gtest.h>

#include "aquo/tomography.hpp"
#include "aquo/tree.hpp"
#include "test_support.hpp"

namespace aquo {
namespace {

// ||(a - b) (x) id applied to |psi><psi|||_1 on the doubled space.
double sampled_lower_bound(const KrausChannel& a, const KrausChannel& b, std::mt19937_64& rng, int samples) {
  const int d = a.dim();
  const ComplexMatrix id = ComplexMatrix::Identity(d, d);
  double best = 0.0;
  for (int s = 0; s < samples; ++s) {
    const ComplexVector psi = testing::random_pure(d * d, rng);
    const ComplexMatrix rho = psi * psi.adjoint();
    ComplexMatrix diff = ComplexMatrix::Zero(d * d, d * d);
    for (const auto& e : a.ops()) {
      const ComplexMatrix k = kron(e, id);
      diff += k * rho * k.adjoint();
    }
    for (const auto& e : b.ops()) {
      const ComplexMatrix k = kron(e, id);
      diff -= k * rho * k.adjoint();
    }
    best = std::max(best, trace_norm(diff));
  }
  return best;
}

ComplexMatrix rz(double theta) {
  ComplexMatrix u = ComplexMatrix::Zero(2, 2);
  u(0, 0) = std::polar(1.0, -theta / 2);
  u(1, 1) = std::polar(1.0, theta / 2);
  return u;
}

TEST(Diamond, SelfDistanceIsZero) {
  std::mt19937_64 rng(31);
  const KrausChannel ch = random_channel(3, 2, rng);
  const DiamondResult r = diamond_distance(ch, ch);
  EXPECT_NEAR(r.value, 0.0, 1e-9);
  EXPECT_TRUE(r.converged);
}

TEST(Diamond, PauliXVersusIdentity) {
  ComplexMatrix x = ComplexMatrix::Zero(2, 2);
  x(0, 1) = 1.0;
  x(1, 0) = 1.0;
  const DiamondResult r = diamond_distance(unitary_channel(x), identity_channel(2));
  EXPECT_NEAR(r.value, 2.0, 2e-4);
  EXPECT_NEAR(succ_probability(std::min(r.value, 2.0)), 1.0, 1e-4);
}

TEST(Diamond, UnitaryPairsMatchAnalyticValue) {
  for (double theta : {0.3, 1.0, 2.0, 3.0}) {
    const DiamondResult r = diamond_distance(unitary_channel(rz(theta)), identity_channel(2));
    EXPECT_NEAR(r.value, 2 * std::sin(theta / 2), 2e-4 * 2) << theta;
  }
}

TEST(Diamond, DepolarizationVersusIdentity) {
  // (a - b) = -p (id - completely depolarizing); diamond norm p * 2 (d^2 - 1) / d^2
  for (int d : {2, 3}) {
    const double p = 0.1;
    const DiamondResult r = diamond_distance(depolarizing_channel(p, d), identity_channel(d));
    const double expect = 2.0 * p * (d * d - 1.0) / (d * d);
    EXPECT_NEAR(r.value, expect, 2e-4 * expect + 1e-6) << d;
  }
}

TEST(Diamond, RandomPairsInsideBounds) {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 4; ++trial) {
    const int d = 2 + trial % 2;
    const KrausChannel a = random_channel(d, 2, rng);
    const KrausChannel b = random_channel(d, 3, rng);
    const DiamondResult r = diamond_distance(a, b);
    EXPECT_GE(r.value, r.lower_bound - 1e-9);
    EXPECT_LE(r.value, r.upper_bound + 1e-9);
    EXPECT_LE(r.value, 2.0 + 1e-9);
    EXPECT_GE(r.value, sampled_lower_bound(a, b, rng, 200) - 1e-6);
    EXPECT_LE(r.certified_lower, r.certified_upper + 1e-9);
  }
}

TEST(Diamond, TriangleInequality) {
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 3; ++trial) {
    const KrausChannel a = random_channel(2, 2, rng);
    const KrausChannel b = random_channel(2, 2, rng);
    const KrausChannel c = random_channel(2, 3, rng);
    const double ab = diamond_distance(a, b).value;
    const double bc = diamond_distance(b, c).value;
    const double ac = diamond_distance(a, c).value;
    EXPECT_LE(ac, (ab + bc) * (1 + 2e-4) + 1e-9);
  }
}

TEST(Diamond, Errors) {
  EXPECT_AQUO_ERROR(diamond_distance(identity_channel(2), identity_channel(3)), DimensionMismatch);
  EXPECT_AQUO_ERROR(diamond_distance(identity_channel(5), identity_channel(5)), UnsupportedDim);
}

}  // namespace
}  // namespace aquo
