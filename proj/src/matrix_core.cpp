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

#include "bdfd/matrix_core.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "bdfd/error.hpp"

namespace bdfd {
namespace {

constexpr double kHermitianTol = 1e-10;
constexpr double kPivotTol = 1e-12;

void require_square(const CMatrix& a, const char* what) {
  if (a.rows() == 0 || a.rows() != a.cols()) {
    throw Error(ErrorKind::kInvalidInput, std::string(what) + ": matrix must be square and non-empty");
  }
}

void require_hermitian(const CMatrix& a, const char* what) {
  require_square(a, what);
  const double scale = max_abs(a);
  const double skew = (a - a.adjoint()).cwiseAbs().maxCoeff();
  if (skew > kHermitianTol * scale) {
    throw Error(ErrorKind::kNotHermitian, std::string(what) + ": skew part " + std::to_string(skew));
  }
}

// Pivot threshold scaled to the average diagonal magnitude.
double pivot_threshold(const CMatrix& a) {
  return kPivotTol * std::abs(a.trace().real()) / static_cast<double>(a.rows());
}

}  // namespace

double max_abs(const CMatrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

CMatrix hermitian_part(const CMatrix& a) { return 0.5 * (a + a.adjoint()); }

void require_finite(const CMatrix& a, const char* what) {
  if (!a.allFinite()) {
    throw Error(ErrorKind::kInvalidInput, std::string(what) + ": non-finite entry");
  }
}

CMatrix strictly_upper(const CMatrix& a) {
  CMatrix out = CMatrix::Zero(a.rows(), a.cols());
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < std::min(j, a.rows()); ++i) out(i, j) = a(i, j);
  }
  return out;
}

EigenSystem hermitian_eig(const CMatrix& a) {
  require_hermitian(a, "hermitian_eig");
  require_finite(a, "hermitian_eig");
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(hermitian_part(a));
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::kNumericalFailure, "hermitian_eig: eigensolver did not converge");
  }
  const Eigen::Index n = a.rows();
  EigenSystem out{CMatrix(n, n), RVector(n)};
  const double top = solver.eigenvalues().cwiseAbs().maxCoeff();
  // Solver order is ascending. Emit clusters of equal eigenvalues from the top
  // down, keeping the solver's order inside each cluster.
  const double tie_tol = 8.0 * n * std::numeric_limits<double>::epsilon() * top;
  std::vector<Eigen::Index> order;
  order.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index hi = n; hi > 0;) {
    Eigen::Index lo = hi - 1;
    while (lo > 0 && solver.eigenvalues()(hi - 1) - solver.eigenvalues()(lo - 1) <= tie_tol) --lo;
    for (Eigen::Index i = lo; i < hi; ++i) order.push_back(i);
    hi = lo;
  }
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index src = order[static_cast<std::size_t>(k)];
    double value = solver.eigenvalues()(src);
    if (value < 0.0 && -value <= 64.0 * n * std::numeric_limits<double>::epsilon() * top) value = 0.0;
    out.values(k) = value;

    CVector v = solver.eigenvectors().col(src);
    Eigen::Index pivot = 0;
    double largest = -1.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double mag = std::abs(v(i));
      if (mag > largest) {
        largest = mag;
        pivot = i;
      }
    }
    if (largest > 0.0) {
      v *= std::conj(v(pivot)) / largest;
      v(pivot) = Complex(std::abs(v(pivot)), 0.0);
    }
    out.vectors.col(k) = v;
  }
  return out;
}

CMatrix cholesky_upper(const CMatrix& a) {
  require_hermitian(a, "cholesky_upper");
  require_finite(a, "cholesky_upper");
  const Eigen::Index n = a.rows();
  const double tol = pivot_threshold(a);
  CMatrix r = CMatrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    double d = a(j, j).real();
    for (Eigen::Index k = 0; k < j; ++k) d -= std::norm(r(k, j));
    if (!(d > tol)) {
      throw Error(ErrorKind::kNotPositiveDefinite,
                  "cholesky_upper: pivot " + std::to_string(j) + " is " + std::to_string(d));
    }
    const double rjj = std::sqrt(d);
    r(j, j) = rjj;
    for (Eigen::Index i = j + 1; i < n; ++i) {
      Complex acc = a(j, i);
      for (Eigen::Index k = 0; k < j; ++k) acc -= std::conj(r(k, j)) * r(k, i);
      r(j, i) = acc / rjj;
    }
  }
  return r;
}

QrFactors qr_positive_diag(const CMatrix& a) {
  const Eigen::Index rows = a.rows();
  const Eigen::Index cols = a.cols();
  if (cols == 0 || rows < cols) {
    throw Error(ErrorKind::kInvalidInput, "qr_positive_diag: need rows >= cols >= 1");
  }
  require_finite(a, "qr_positive_diag");
  Eigen::HouseholderQR<CMatrix> qr(a);
  QrFactors out;
  out.q = qr.householderQ() * CMatrix::Identity(rows, cols);
  out.r = qr.matrixQR().topRows(cols).triangularView<Eigen::Upper>();

  const double tol = kPivotTol * a.squaredNorm() / static_cast<double>(cols);
  for (Eigen::Index i = 0; i < cols; ++i) {
    const double mag = std::abs(out.r(i, i));
    if (!(mag * mag > tol)) {
      throw Error(ErrorKind::kRankDeficient, "qr_positive_diag: pivot " + std::to_string(i) + " vanishes");
    }
    const Complex phase = out.r(i, i) / mag;
    out.r.row(i) *= std::conj(phase);
    out.q.col(i) *= phase;
    out.r(i, i) = Complex(mag, 0.0);
  }
  return out;
}

CMatrix pinv_full_col_rank(const CMatrix& a) {
  const QrFactors qr = qr_positive_diag(a);
  // A = QR  =>  (A^H A)^{-1} A^H = R^{-1} Q^H.
  return qr.r.triangularView<Eigen::Upper>().solve(qr.q.adjoint());
}

CMatrix inv_sqrt_pd(const CMatrix& a) {
  require_hermitian(a, "inv_sqrt_pd");
  const Eigen::Index n = a.rows();
  const double tol = pivot_threshold(a);

  const bool diagonal = (a - CMatrix(a.diagonal().asDiagonal())).cwiseAbs().maxCoeff() == 0.0;
  if (diagonal) {
    CMatrix out = CMatrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double d = a(i, i).real();
      if (!(d > tol)) throw Error(ErrorKind::kNotPositiveDefinite, "inv_sqrt_pd: non-positive diagonal");
      out(i, i) = 1.0 / std::sqrt(d);
    }
    return out;
  }

  const EigenSystem eig = hermitian_eig(a);
  if (!(eig.values(n - 1) > tol)) {
    throw Error(ErrorKind::kNotPositiveDefinite, "inv_sqrt_pd: smallest eigenvalue " +
                                                     std::to_string(eig.values(n - 1)));
  }
  const RVector scale = eig.values.cwiseSqrt().cwiseInverse();
  return hermitian_part(eig.vectors * scale.cast<Complex>().asDiagonal() * eig.vectors.adjoint());
}

CMatrix orthogonal_complement(const CMatrix& a) {
  const Eigen::Index rows = a.rows();
  const Eigen::Index cols = a.cols();
  if (cols == 0) return CMatrix::Identity(rows, rows);
  Eigen::HouseholderQR<CMatrix> qr(a);
  const CMatrix full = qr.householderQ();
  return full.rightCols(rows - cols);
}

}  // namespace bdfd
