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

#include "bdfd/error.hpp"
#include "bdfd/matrix_core.hpp"
#include "test_util.hpp"

namespace bdfd {
namespace {

using testing::TestRng;

CMatrix diag(std::initializer_list<double> d) {
  CMatrix a = CMatrix::Zero(static_cast<Eigen::Index>(d.size()), static_cast<Eigen::Index>(d.size()));
  Eigen::Index i = 0;
  for (double x : d) a(i, i) = x, ++i;
  return a;
}

TEST(HermitianEig, DiagonalInputIsSortedDescending) {
  const EigenSystem e = hermitian_eig(diag({1.0, 4.0}));
  EXPECT_DOUBLE_EQ(e.values(0), 4.0);
  EXPECT_DOUBLE_EQ(e.values(1), 1.0);
  CMatrix swap(2, 2);
  swap << 0.0, 1.0, 1.0, 0.0;
  EXPECT_LT((e.vectors - swap).norm(), 1e-14);
}

TEST(HermitianEig, IdentityKeepsIdentityVectors) {
  const EigenSystem e = hermitian_eig(CMatrix::Identity(3, 3));
  for (int i = 0; i < 3; ++i) EXPECT_DOUBLE_EQ(e.values(i), 1.0);
  EXPECT_LT((e.vectors - CMatrix::Identity(3, 3)).norm(), 1e-14);
}

TEST(HermitianEig, ReconstructsRandomGram) {
  TestRng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const CMatrix g = rng.matrix(4, 4);
    const CMatrix a = g.adjoint() * g;
    const EigenSystem e = hermitian_eig(a);
    const CMatrix back = e.vectors * e.values.cast<Complex>().asDiagonal() * e.vectors.adjoint();
    EXPECT_LT(testing::rel_err(back, a), 1e-10);
    EXPECT_LT((e.vectors.adjoint() * e.vectors - CMatrix::Identity(4, 4)).norm(), 1e-12);
    for (int i = 0; i + 1 < 4; ++i) EXPECT_GE(e.values(i), e.values(i + 1));
  }
}

TEST(HermitianEig, PhaseConventionMakesPivotReal) {
  TestRng rng(12);
  const EigenSystem e = hermitian_eig(rng.pd(5));
  for (int k = 0; k < 5; ++k) {
    Eigen::Index pivot = 0;
    e.vectors.col(k).cwiseAbs().maxCoeff(&pivot);
    EXPECT_NEAR(e.vectors(pivot, k).imag(), 0.0, 1e-15);
    EXPECT_GT(e.vectors(pivot, k).real(), 0.0);
  }
}

TEST(HermitianEig, RejectsNonHermitian) {
  CMatrix a(2, 2);
  a << 1.0, 2.0, 0.0, 1.0;
  try {
    hermitian_eig(a);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kNotHermitian);
  }
}

TEST(Cholesky, Diagonal) {
  EXPECT_LT((cholesky_upper(diag({4.0, 1.0})) - diag({2.0, 1.0})).norm(), 1e-15);
}

TEST(Cholesky, Reconstructs) {
  CMatrix a(2, 2);
  a << 2.0, 1.0, 1.0, 2.0;
  const CMatrix r = cholesky_upper(a);
  EXPECT_LT((r.adjoint() * r - a).norm(), 1e-12);
  EXPECT_EQ(r(1, 0), Complex(0.0));
  TestRng rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    const CMatrix b = rng.pd(6);
    const CMatrix rb = cholesky_upper(b);
    EXPECT_LT(testing::rel_err(rb.adjoint() * rb, b), 1e-12);
    for (int i = 0; i < 6; ++i) {
      EXPECT_GT(rb(i, i).real(), 0.0);
      EXPECT_EQ(rb(i, i).imag(), 0.0);
    }
  }
}

TEST(Cholesky, SingularIsNotPositiveDefinite) {
  CMatrix a(2, 2);
  a << 1.0, 1.0, 1.0, 1.0;
  try {
    cholesky_upper(a);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kNotPositiveDefinite);
  }
}

TEST(Qr, TrivialCases) {
  const QrFactors i2 = qr_positive_diag(CMatrix::Identity(2, 2));
  EXPECT_LT((i2.q - CMatrix::Identity(2, 2)).norm(), 1e-15);
  EXPECT_LT((i2.r - CMatrix::Identity(2, 2)).norm(), 1e-15);
  const QrFactors d = qr_positive_diag(diag({2.0, 1.0}));
  EXPECT_LT((d.q - CMatrix::Identity(2, 2)).norm(), 1e-15);
  EXPECT_LT((d.r - diag({2.0, 1.0})).norm(), 1e-15);
}

TEST(Qr, MatchesGramSchmidtOracle) {
  TestRng rng(14);
  for (int trial = 0; trial < 20; ++trial) {
    const CMatrix a = rng.matrix(5, 3);
    const QrFactors f = qr_positive_diag(a);
    EXPECT_LT((f.q.adjoint() * f.q - CMatrix::Identity(3, 3)).norm(), 1e-10);
    EXPECT_LT(testing::rel_err(f.q * f.r, a), 1e-10);
    CMatrix q;
    CMatrix r;
    testing::gram_schmidt_qr(a, q, r);
    EXPECT_LT(testing::rel_err(f.r, r), 1e-10);
    EXPECT_LT(testing::rel_err(f.q, q), 1e-10);
  }
}

TEST(Qr, RankDeficient) {
  CMatrix a(3, 2);
  a << 1.0, 2.0, 1.0, 2.0, 1.0, 2.0;
  try {
    qr_positive_diag(a);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kRankDeficient);
  }
}

TEST(Pinv, ColumnVector) {
  CMatrix a(2, 1);
  a << 1.0, 1.0;
  const CMatrix p = pinv_full_col_rank(a);
  ASSERT_EQ(p.rows(), 1);
  EXPECT_NEAR(p(0, 0).real(), 0.5, 1e-15);
  EXPECT_NEAR(p(0, 1).real(), 0.5, 1e-15);
}

TEST(Pinv, SquareIsInverseAndTallIsLeftInverse) {
  TestRng rng(15);
  const CMatrix sq = rng.matrix(4, 4);
  EXPECT_LT(testing::rel_err(pinv_full_col_rank(sq), sq.inverse()), 1e-10);
  const CMatrix tall = rng.matrix(6, 3);
  EXPECT_LT((pinv_full_col_rank(tall) * tall - CMatrix::Identity(3, 3)).norm(), 1e-10);
}

TEST(InvSqrt, DiagonalAndScaledIdentity) {
  const CMatrix b = inv_sqrt_pd(diag({4.0, 9.0}));
  EXPECT_LT((b - diag({0.5, 1.0 / 3.0})).norm(), 1e-15);
  const CMatrix s = inv_sqrt_pd(0.25 * CMatrix::Identity(3, 3));
  EXPECT_LT((s - 2.0 * CMatrix::Identity(3, 3)).norm(), 1e-15);
}

TEST(InvSqrt, ProductIsIdentity) {
  TestRng rng(16);
  for (int trial = 0; trial < 10; ++trial) {
    const CMatrix a = rng.pd(5);
    const CMatrix b = inv_sqrt_pd(a);
    EXPECT_LT((b * a * b - CMatrix::Identity(5, 5)).norm(), 1e-10);
    EXPECT_LT((b - b.adjoint()).norm(), 1e-12);
  }
}

TEST(InvSqrt, RejectsIndefinite) {
  try {
    inv_sqrt_pd(diag({1.0, -1.0}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kNotPositiveDefinite);
  }
}

TEST(Helpers, OrthogonalComplementAndStrictlyUpper) {
  TestRng rng(17);
  const CMatrix a = rng.matrix(5, 2);
  const CMatrix c = orthogonal_complement(a);
  ASSERT_EQ(c.cols(), 3);
  EXPECT_LT((c.adjoint() * a).norm(), 1e-12);
  EXPECT_LT((c.adjoint() * c - CMatrix::Identity(3, 3)).norm(), 1e-12);
  const CMatrix u = strictly_upper(rng.matrix(3, 3));
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j <= i; ++j) EXPECT_EQ(u(i, j), Complex(0.0));
  }
}

TEST(Helpers, NonFiniteInputRejected) {
  CMatrix a = CMatrix::Identity(2, 2);
  a(0, 1) = std::nan("");
  a(1, 0) = std::nan("");
  EXPECT_THROW(require_finite(a, "x"), Error);
}

}  // namespace
}  // namespace bdfd
