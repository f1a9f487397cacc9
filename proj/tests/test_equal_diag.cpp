// Copyright 2026 The bdfd Authors
// SPDX-License-Identifier: Apache-2.0
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

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "bdfd/equal_diag.hpp"
#include "bdfd/error.hpp"
#include "test_util.hpp"

namespace bdfd {
namespace {

using testing::TestRng;

CMatrix gamma_matrix(const std::vector<double>& g) {
  CMatrix a = CMatrix::Zero(static_cast<Eigen::Index>(g.size()), static_cast<Eigen::Index>(g.size()));
  for (std::size_t i = 0; i < g.size(); ++i) a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = g[i];
  return a;
}

double geometric_mean(const std::vector<double>& g) {
  double s = 0.0;
  for (double x : g) s += std::log(x);
  return std::exp(s / static_cast<double>(g.size()));
}

TEST(EqualDiag, EqualGammasShortCircuit) {
  const std::vector<double> g(5, 1.7);
  const EqualDiagRotation rot = equal_diag_rotation(GammaSpec::from_sorted(g));
  EXPECT_LT((rot.s - CMatrix::Identity(5, 5)).norm(), 1e-15);
  EXPECT_DOUBLE_EQ(rot.r_diag, 1.7);
}

TEST(EqualDiag, TwoByTwoHandValues) {
  const std::vector<double> g{2.0, 1.0};
  const EqualDiagRotation rot = equal_diag_rotation(GammaSpec::from_sorted(g));
  EXPECT_NEAR(std::abs(rot.s(0, 0)), std::sqrt(1.0 / 3.0), 1e-14);
  EXPECT_NEAR(std::abs(rot.s(1, 0)), std::sqrt(2.0 / 3.0), 1e-14);
  EXPECT_NEAR(rot.r_diag, std::sqrt(2.0), 1e-14);
  CMatrix q;
  CMatrix r;
  testing::gram_schmidt_qr(gamma_matrix(g) * rot.s, q, r);
  EXPECT_NEAR(r(0, 0).real(), std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(r(1, 1).real(), std::sqrt(2.0), 1e-12);
}

TEST(EqualDiag, RandomDescendingGammas) {
  TestRng rng(21);
  for (int m : {3, 8, 16}) {
    for (int trial = 0; trial < 10; ++trial) {
      const std::vector<double> g = rng.descending(static_cast<std::size_t>(m), 0.05, 5.0);
      const EqualDiagRotation rot = equal_diag_rotation(GammaSpec::from_sorted(g));
      const double target = geometric_mean(g);
      EXPECT_NEAR(rot.r_diag, target, 1e-12 * target);
      EXPECT_LT((rot.s.adjoint() * rot.s - CMatrix::Identity(m, m)).norm(), 1e-10);
      CMatrix q;
      CMatrix r;
      testing::gram_schmidt_qr(gamma_matrix(g) * rot.s, q, r);
      for (int i = 0; i < m; ++i) EXPECT_NEAR(r(i, i).real(), target, 1e-8 * target) << "m=" << m << " i=" << i;
    }
  }
}

TEST(EqualDiag, UnsortedInputViaPermutation) {
  const std::vector<double> g{0.5, 3.0, 1.0, 2.0};
  const GammaSpec spec = GammaSpec::sorted(g);
  EXPECT_EQ(spec.values(), (std::vector<double>{3.0, 2.0, 1.0, 0.5}));
  const EqualDiagRotation rot = equal_diag_rotation(spec);
  const CMatrix s = spec.unpermute_rows(rot.s);
  CMatrix q;
  CMatrix r;
  testing::gram_schmidt_qr(gamma_matrix(g) * s, q, r);
  const double target = geometric_mean(g);
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(r(i, i).real(), target, 1e-10 * target);
}

TEST(EqualDiag, RejectsBadInput) {
  const std::vector<double> increasing{1.0, 2.0};
  const std::vector<double> zero{1.0, 0.0};
  EXPECT_THROW(GammaSpec::from_sorted(increasing), Error);
  EXPECT_THROW(GammaSpec::from_sorted(zero), Error);
  EXPECT_THROW(GammaSpec::from_sorted(std::vector<double>{}), Error);
}

TEST(EqualDiag, WideDynamicRange) {
  const std::vector<double> g{1e3, 10.0, 1.0, 1e-2, 1e-3};
  const EqualDiagRotation rot = equal_diag_rotation(GammaSpec::from_sorted(g));
  CMatrix q;
  CMatrix r;
  testing::gram_schmidt_qr(gamma_matrix(g) * rot.s, q, r);
  const double target = geometric_mean(g);
  for (int i = 0; i < 5; ++i) EXPECT_NEAR(r(i, i).real(), target, 1e-8 * target);
}

}  // namespace
}  // namespace bdfd
