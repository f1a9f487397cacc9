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

#pragma once

#include <complex>

#include <Eigen/Dense>

namespace bdfd {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

/// Descending eigendecomposition A = V diag(values) V^H of a Hermitian matrix.
///
/// Each column of `vectors` is phase-normalised so that its first entry of
/// largest magnitude is real and non-negative. This fixes the otherwise free
/// per-vector phase and makes every downstream design bit-reproducible.
struct EigenSystem {
  CMatrix vectors;
  RVector values;
};

EigenSystem hermitian_eig(const CMatrix& a);

/// Upper-triangular R with positive real diagonal such that A = R^H R.
CMatrix cholesky_upper(const CMatrix& a);

struct QrFactors {
  CMatrix q;  // rows x cols, orthonormal columns
  CMatrix r;  // cols x cols, upper triangular, positive real diagonal
};

/// Thin QR with the positive-diagonal convention (unique for full column rank).
QrFactors qr_positive_diag(const CMatrix& a);

/// (A^H A)^{-1} A^H for a tall matrix of full column rank.
CMatrix pinv_full_col_rank(const CMatrix& a);

/// Hermitian positive definite B with B A B = I.
CMatrix inv_sqrt_pd(const CMatrix& a);

// Helpers shared across modules.

/// (A + A^H) / 2.
CMatrix hermitian_part(const CMatrix& a);

double max_abs(const CMatrix& a);

/// Throws InvalidInput if any entry is NaN or infinite.
void require_finite(const CMatrix& a, const char* what);

/// Orthonormal basis of the orthogonal complement of span(A) (A tall, full
/// column rank). Returns rows x (rows - cols).
CMatrix orthogonal_complement(const CMatrix& a);

/// Strictly upper triangular part; diagonal and lower triangle are exact zeros.
CMatrix strictly_upper(const CMatrix& a);

}  // namespace bdfd
