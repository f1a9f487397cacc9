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

#include "bdfd/equal_diag.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "bdfd/error.hpp"

namespace bdfd {
namespace {

constexpr double kEqualTol = 1e-9;

void validate(std::span<const double> gammas) {
  if (gammas.empty()) throw Error(ErrorKind::kInvalidInput, "equal_diag: empty diagonal");
  for (double g : gammas) {
    if (!(g > 0.0) || !std::isfinite(g)) {
      throw Error(ErrorKind::kInvalidInput, "equal_diag: diagonal entries must be positive and finite");
    }
  }
}

// sqrt of a ratio that is analytically in [0, 1]; clamps rounding overshoot.
double unit_sqrt(double num, double den) { return std::sqrt(std::clamp(num / den, 0.0, 1.0)); }

}  // namespace

GammaSpec GammaSpec::from_sorted(std::span<const double> gammas) {
  validate(gammas);
  for (std::size_t i = 1; i < gammas.size(); ++i) {
    if (gammas[i] > gammas[i - 1]) {
      throw Error(ErrorKind::kInvalidInput, "equal_diag: diagonal must be non-increasing");
    }
  }
  std::vector<std::size_t> order(gammas.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  return GammaSpec({gammas.begin(), gammas.end()}, std::move(order));
}

GammaSpec GammaSpec::sorted(std::span<const double> gammas) {
  validate(gammas);
  std::vector<std::size_t> order(gammas.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return gammas[a] > gammas[b]; });
  std::vector<double> values(gammas.size());
  for (std::size_t i = 0; i < order.size(); ++i) values[i] = gammas[order[i]];
  return GammaSpec(std::move(values), std::move(order));
}

CMatrix GammaSpec::unpermute_rows(const CMatrix& s) const {
  CMatrix out(s.rows(), s.cols());
  for (std::size_t i = 0; i < order_.size(); ++i) {
    out.row(static_cast<Eigen::Index>(order_[i])) = s.row(static_cast<Eigen::Index>(i));
  }
  return out;
}

EqualDiagRotation equal_diag_rotation(const GammaSpec& spec) {
  const auto& gamma = spec.values();
  const Eigen::Index m = static_cast<Eigen::Index>(gamma.size());

  double log_sum = 0.0;
  for (double g : gamma) log_sum += std::log(g);
  const double r_diag = std::exp(log_sum / static_cast<double>(m));
  const double g = r_diag * r_diag;

  if (m == 1 || gamma.front() - gamma.back() <= kEqualTol * gamma.front()) {
    return {CMatrix::Identity(m, m), r_diag};
  }

  CMatrix gamma_mat = CMatrix::Zero(m, m);
  for (Eigen::Index i = 0; i < m; ++i) gamma_mat(i, i) = gamma[static_cast<std::size_t>(i)];

  CMatrix s = CMatrix::Zero(m, m);
  for (Eigen::Index k = 0; k + 1 < m; ++k) {
    // Basis of the space orthogonal to the k columns already chosen.
    const CMatrix basis = orthogonal_complement(s.leftCols(k));
    const Eigen::Index dim = m - k;

    CMatrix vecs;
    RVector vals;
    if (k == 0) {
      // Gamma^2 is already diagonal and sorted.
      vecs = CMatrix::Identity(m, m);
      vals = RVector(m);
      for (Eigen::Index i = 0; i < m; ++i) vals(i) = gamma_mat(i, i).real() * gamma_mat(i, i).real();
    } else {
      const CMatrix residual = gamma_mat * basis;
      const CMatrix used = gamma_mat * s.leftCols(k);
      // Project the residual columns off span(Gamma Z_k).
      const CMatrix used_q = qr_positive_diag(used).q;
      const CMatrix projected = residual - used_q * (used_q.adjoint() * residual);
      const EigenSystem eig = hermitian_eig(hermitian_part(residual.adjoint() * projected));
      vecs = eig.vectors;
      vals = eig.values;
    }

    const double hi = vals(0);
    const double lo = vals(dim - 1);
    if (g < lo - kEqualTol * hi || g > hi + kEqualTol * hi) {
      throw Error(ErrorKind::kNumericalFailure,
                  "equal_diag: target " + std::to_string(g) + " outside [" + std::to_string(lo) + ", " +
                      std::to_string(hi) + "] at column " + std::to_string(k + 1));
    }

    double y_hi = 1.0;
    double y_lo = 0.0;
    if (hi - lo > kEqualTol * hi) {
      y_hi = unit_sqrt(g - lo, hi - lo);
      y_lo = unit_sqrt(hi - g, hi - lo);
    }
    const CVector mix = y_hi * vecs.col(0) + y_lo * vecs.col(dim - 1);
    s.col(k) = basis * mix;

    if (k + 2 == m) {
      // Final column: the remaining direction of the two-dimensional space.
      const CVector last = -y_lo * vecs.col(0) + y_hi * vecs.col(dim - 1);
      s.col(m - 1) = basis * last;
    }
  }
  return {s, r_diag};
}

}  // namespace bdfd
