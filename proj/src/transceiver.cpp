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

#include "bdfd/transceiver.hpp"

#include <cmath>
#include <numbers>

#include "bdfd/equal_diag.hpp"
#include "bdfd/error.hpp"

namespace bdfd {
namespace {

constexpr double kRankTol = 1e-12;

void validate_spec(const DesignSpec& spec) {
  if (spec.m < 1) throw Error(ErrorKind::kInvalidInput, "block size M must be >= 1");
  if (!(spec.p0 > 0.0) || !std::isfinite(spec.p0)) {
    throw Error(ErrorKind::kInvalidInput, "power budget p0 must be positive and finite");
  }
}

void validate_descending_positive(std::span<const double> lambdas, const char* what) {
  if (lambdas.empty()) throw Error(ErrorKind::kInvalidInput, std::string(what) + ": no eigenvalues");
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    if (!(lambdas[i] > 0.0) || !std::isfinite(lambdas[i])) {
      throw Error(ErrorKind::kInvalidInput, std::string(what) + ": eigenvalues must be positive");
    }
    if (i > 0 && lambdas[i] > lambdas[i - 1]) {
      throw Error(ErrorKind::kInvalidInput, std::string(what) + ": eigenvalues must be non-increasing");
    }
  }
}

CMatrix real_diagonal(std::span<const double> d) {
  const auto n = static_cast<Eigen::Index>(d.size());
  CMatrix out = CMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) out(i, i) = d[static_cast<std::size_t>(i)];
  return out;
}

// Unit-diagonal upper triangular factor: exact ones on the diagonal, exact
// zeros below it.
CMatrix unit_upper(const CMatrix& upper, const RVector& diag) {
  CMatrix u = CMatrix::Identity(upper.rows(), upper.cols());
  for (Eigen::Index j = 0; j < upper.cols(); ++j)
    for (Eigen::Index i = 0; i < j; ++i) u(i, j) = upper(i, j) / diag(i);
  return u;
}

CMatrix inverse_pd(const CMatrix& a) {
  Eigen::LLT<CMatrix> llt(hermitian_part(a));
  if (llt.info() != Eigen::Success) throw Error(ErrorKind::kNotPositiveDefinite, "matrix inverse failed");
  return llt.solve(CMatrix::Identity(a.rows(), a.cols()));
}

// W = U F^H H^H (H F F^H H^H + Rvv)^{-1}, evaluated as U (Ryy^{-1} H F)^H.
CMatrix mmse_feedforward(const ChannelModel& ch, const CMatrix& f, const CMatrix& u) {
  const CMatrix hf = ch.h * f;
  const CMatrix ryy = hermitian_part(hf * hf.adjoint() + ch.rvv);
  Eigen::LLT<CMatrix> llt(ryy);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorKind::kNotPositiveDefinite, "received-signal covariance is not positive definite");
  }
  return u * llt.solve(hf).adjoint();
}

Eigen::Index numerical_rank(const CMatrix& f) {
  if (f.size() == 0) return 0;
  const RVector s = Eigen::JacobiSVD<CMatrix>(f).singularValues();
  const double tol = 1e-10 * s(0);
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > tol) ++rank;
  return rank;
}

}  // namespace

std::string_view to_string(TransceiverKind kind) {
  switch (kind) {
    case TransceiverKind::kZfBdfd: return "ZF_BDFD";
    case TransceiverKind::kMmseBdfd: return "MMSE_BDFD";
    case TransceiverKind::kLinearZf: return "LINEAR_ZF";
    case TransceiverKind::kLinearMmse: return "LINEAR_MMSE";
  }
  return "?";
}

TransceiverKind parse_transceiver_kind(std::string_view name) {
  for (auto k : {TransceiverKind::kZfBdfd, TransceiverKind::kMmseBdfd, TransceiverKind::kLinearZf,
                 TransceiverKind::kLinearMmse}) {
    if (name == to_string(k)) return k;
  }
  throw Error(ErrorKind::kInvalidInput, "unknown transceiver kind '" + std::string(name) + "'");
}

std::string_view to_string(BaselineKind kind) {
  switch (kind) {
    case BaselineKind::kIdentity: return "IDENTITY";
    case BaselineKind::kDft: return "DFT";
    case BaselineKind::kOptLinearZf: return "OPT_LINEAR_ZF";
    case BaselineKind::kOptLinearMmse: return "OPT_LINEAR_MMSE";
  }
  return "?";
}

std::vector<double> significant_eigenvalues(const RVector& values) {
  const double tol = kRankTol * values.sum() / static_cast<double>(std::max<Eigen::Index>(values.size(), 1));
  std::vector<double> out;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (values(i) > tol) out.push_back(values(i));
  }
  return out;
}

WaterfillResult waterfill(std::span<const double> lambdas, const DesignSpec& spec) {
  validate_spec(spec);
  validate_descending_positive(lambdas, "waterfill");

  WaterfillResult out;
  double inv_sum = 0.0;
  for (std::size_t r = 1; r <= lambdas.size(); ++r) {
    const double inv = 1.0 / lambdas[r - 1];
    inv_sum += inv;
    if (inv < (spec.p0 + inv_sum) / static_cast<double>(r)) out.r = static_cast<Eigen::Index>(r);
  }
  out.q = std::min(out.r, spec.m);

  double level = spec.p0;
  for (Eigen::Index j = 0; j < out.q; ++j) level += 1.0 / lambdas[static_cast<std::size_t>(j)];
  level /= static_cast<double>(out.q);

  // level - 1/lambda_i cancels badly when sum(1/lambda) >> p0; rescale so the
  // allocation spends exactly p0.
  std::vector<double> power(static_cast<std::size_t>(out.q));
  double total = 0.0;
  for (std::size_t i = 0; i < power.size(); ++i) {
    power[i] = level - 1.0 / lambdas[i];
    total += power[i];
  }
  out.phi.resize(power.size());
  for (std::size_t i = 0; i < power.size(); ++i) out.phi[i] = std::sqrt(power[i] * (spec.p0 / total));
  return out;
}

LinearMmseAllocation linear_mmse_allocation(std::span<const double> lambdas, const DesignSpec& spec) {
  validate_spec(spec);
  validate_descending_positive(lambdas, "linear_mmse_allocation");

  LinearMmseAllocation out;
  double inv_sqrt_sum = 0.0;
  double inv_sum = 0.0;
  for (std::size_t l = 1; l <= lambdas.size(); ++l) {
    inv_sqrt_sum += 1.0 / std::sqrt(lambdas[l - 1]);
    inv_sum += 1.0 / lambdas[l - 1];
    if (inv_sqrt_sum / std::sqrt(lambdas[l - 1]) - inv_sum < spec.p0) out.ell = static_cast<Eigen::Index>(l);
  }
  out.k = std::min(out.ell, spec.m);

  double num = spec.p0;
  double den = 0.0;
  for (Eigen::Index j = 0; j < out.k; ++j) {
    num += 1.0 / lambdas[static_cast<std::size_t>(j)];
    den += 1.0 / std::sqrt(lambdas[static_cast<std::size_t>(j)]);
  }
  out.upsilon2.resize(static_cast<std::size_t>(out.k));
  for (std::size_t i = 0; i < out.upsilon2.size(); ++i) {
    out.upsilon2[i] = (num / den) / std::sqrt(lambdas[i]) - 1.0 / lambdas[i];
  }
  return out;
}

Transceiver design_zf_bdfd(const ChannelModel& ch, const DesignSpec& spec) {
  validate_spec(spec);
  const WhitenedGram wg = whitened_gram(ch);
  const EigenSystem eig = hermitian_eig(wg.gram);
  const Eigen::Index m = spec.m;

  const std::vector<double> lambdas = significant_eigenvalues(eig.values);
  if (static_cast<Eigen::Index>(lambdas.size()) < m) {
    throw Error(ErrorKind::kRankDeficient, "zero-forcing needs rank(H) >= M");
  }

  std::vector<double> gammas(static_cast<std::size_t>(m));
  double log_prod = 0.0;
  for (std::size_t i = 0; i < gammas.size(); ++i) {
    gammas[i] = std::sqrt(lambdas[i]);
    log_prod += std::log(lambdas[i]);
  }
  const EqualDiagRotation rot = equal_diag_rotation(GammaSpec::from_sorted(gammas));

  Transceiver t;
  t.kind = TransceiverKind::kZfBdfd;
  t.q_active = m;
  t.f = std::sqrt(spec.p0 / static_cast<double>(m)) * eig.vectors.leftCols(m) * rot.s;

  // Lambda^{1/2} Psi = Q Ubar; every diagonal entry of Ubar is (prod lambda)^{1/(2M)}.
  const QrFactors qr = qr_positive_diag(real_diagonal(gammas) * rot.s);
  const CMatrix u = unit_upper(qr.r, qr.r.diagonal().real());
  t.b = strictly_upper(u);

  const CMatrix u_exact = t.b + CMatrix::Identity(m, m);
  t.w = u_exact * pinv_full_col_rank(wg.h_breve * t.f) * wg.rvv_inv_sqrt;

  const double sigma_e2 = (static_cast<double>(m) / spec.p0) * std::exp(-log_prod / static_cast<double>(m));
  t.predicted_ree = sigma_e2 * CMatrix::Identity(m, m);
  return t;
}

Transceiver design_mmse_bdfd(const ChannelModel& ch, const DesignSpec& spec) {
  validate_spec(spec);
  const WhitenedGram wg = whitened_gram(ch);
  const EigenSystem eig = hermitian_eig(wg.gram);
  const Eigen::Index m = spec.m;

  const std::vector<double> lambdas = significant_eigenvalues(eig.values);
  if (lambdas.empty()) throw Error(ErrorKind::kRankDeficient, "channel carries no signal");
  const WaterfillResult wf = waterfill(lambdas, spec);
  const Eigen::Index q = wf.q;

  // Diagonal of (I + Phi^T Lambda_q Phi)^{1/2}: active modes first, then ones.
  std::vector<double> gammas(static_cast<std::size_t>(m), 1.0);
  for (std::size_t i = 0; i < static_cast<std::size_t>(q); ++i) {
    gammas[i] = std::sqrt(1.0 + wf.power(i) * lambdas[i]);
  }
  const GammaSpec gspec = GammaSpec::sorted(gammas);
  const EqualDiagRotation rot = equal_diag_rotation(gspec);
  const CMatrix psi = gspec.unpermute_rows(rot.s);

  CMatrix phi_breve = CMatrix::Zero(q, m);
  for (Eigen::Index i = 0; i < q; ++i) phi_breve(i, i) = wf.phi[static_cast<std::size_t>(i)];

  Transceiver t;
  t.kind = TransceiverKind::kMmseBdfd;
  t.q_active = q;
  t.f = eig.vectors.leftCols(q) * phi_breve * psi;

  const QrFactors qr = qr_positive_diag(real_diagonal(gammas) * psi);
  const CMatrix u = unit_upper(qr.r, qr.r.diagonal().real());
  t.b = strictly_upper(u);
  t.w = mmse_feedforward(ch, t.f, t.b + CMatrix::Identity(m, m));

  const double sigma_e2 = 1.0 / (rot.r_diag * rot.r_diag);
  t.predicted_ree = sigma_e2 * CMatrix::Identity(m, m);
  if (q < m) {
    t.warnings.push_back("only " + std::to_string(q) + " of " + std::to_string(m) +
                         " symbols map to active eigenmodes; expect a high error floor");
  }
  return t;
}

Transceiver receiver_for_precoder(const ChannelModel& ch, const CMatrix& f, TransceiverKind kind) {
  const WhitenedGram wg = whitened_gram(ch);
  if (f.rows() != ch.tx_dim() || f.cols() < 1) {
    throw Error(ErrorKind::kInvalidInput, "precoder must be K x M");
  }
  require_finite(f, "precoder");
  const Eigen::Index m = f.cols();

  Transceiver t;
  t.kind = kind;
  t.f = f;
  t.q_active = numerical_rank(f);

  CMatrix a = hermitian_part(f.adjoint() * wg.gram * f);
  if (!is_zero_forcing(kind)) a += CMatrix::Identity(m, m);

  CMatrix u = CMatrix::Identity(m, m);
  if (uses_feedback(kind)) {
    CMatrix r;
    try {
      r = cholesky_upper(a);
    } catch (const Error& e) {
      if (is_zero_forcing(kind)) throw Error(ErrorKind::kRankDeficient, "zero-forcing infeasible: H F rank < M");
      throw;
    }
    // A = R^H R; U = diag(R)^{-1} R makes U A^{-1} U^H diagonal.
    u = unit_upper(r, r.diagonal().real());
  }
  t.b = strictly_upper(u);

  if (is_zero_forcing(kind)) {
    const CMatrix pinv = [&] {
      try {
        return pinv_full_col_rank(wg.h_breve * f);
      } catch (const Error&) {
        throw Error(ErrorKind::kRankDeficient, "zero-forcing infeasible: H F rank < M");
      }
    }();
    t.w = u * pinv * wg.rvv_inv_sqrt;
  } else {
    t.w = mmse_feedforward(ch, f, u);
  }
  t.predicted_ree = hermitian_part(u * inverse_pd(a) * u.adjoint());
  return t;
}

CMatrix dft_matrix(Eigen::Index m) {
  CMatrix d(m, m);
  const double scale = 1.0 / std::sqrt(static_cast<double>(m));
  for (Eigen::Index r = 0; r < m; ++r) {
    for (Eigen::Index c = 0; c < m; ++c) {
      // Reduce the exponent mod m first so large blocks keep full accuracy.
      const double angle = -2.0 * std::numbers::pi * static_cast<double>((r * c) % m) / static_cast<double>(m);
      d(r, c) = scale * Complex(std::cos(angle), std::sin(angle));
    }
  }
  return d;
}

CMatrix baseline_precoder(BaselineKind kind, const ChannelModel& ch, const DesignSpec& spec) {
  validate_spec(spec);
  validate(ch);
  const Eigen::Index m = spec.m;
  const double per_symbol = std::sqrt(spec.p0 / static_cast<double>(m));

  switch (kind) {
    case BaselineKind::kIdentity:
    case BaselineKind::kDft: {
      if (ch.tx_dim() != m) {
        throw Error(ErrorKind::kInvalidInput, "channel-independent precoders need K == M");
      }
      if (kind == BaselineKind::kIdentity) return per_symbol * CMatrix::Identity(m, m);
      return per_symbol * dft_matrix(m).adjoint();
    }
    case BaselineKind::kOptLinearZf: {
      const EigenSystem eig = hermitian_eig(whitened_gram(ch).gram);
      const std::vector<double> lambdas = significant_eigenvalues(eig.values);
      if (static_cast<Eigen::Index>(lambdas.size()) < m) {
        throw Error(ErrorKind::kRankDeficient, "linear zero-forcing needs rank(H) >= M");
      }
      std::vector<double> shape(static_cast<std::size_t>(m));
      double trace_inv_sqrt = 0.0;
      for (std::size_t i = 0; i < shape.size(); ++i) {
        shape[i] = std::pow(lambdas[i], -0.25);
        trace_inv_sqrt += 1.0 / std::sqrt(lambdas[i]);
      }
      return std::sqrt(spec.p0 / trace_inv_sqrt) * eig.vectors.leftCols(m) * real_diagonal(shape) *
             dft_matrix(m);
    }
    case BaselineKind::kOptLinearMmse: {
      const EigenSystem eig = hermitian_eig(whitened_gram(ch).gram);
      const std::vector<double> lambdas = significant_eigenvalues(eig.values);
      if (lambdas.empty()) throw Error(ErrorKind::kRankDeficient, "channel carries no signal");
      const LinearMmseAllocation alloc = linear_mmse_allocation(lambdas, spec);
      CMatrix loading = CMatrix::Zero(alloc.k, m);
      for (Eigen::Index i = 0; i < alloc.k; ++i) {
        loading(i, i) = std::sqrt(alloc.upsilon2[static_cast<std::size_t>(i)]);
      }
      return eig.vectors.leftCols(alloc.k) * loading * dft_matrix(m);
    }
  }
  throw Error(ErrorKind::kInvalidInput, "unknown baseline precoder");
}

}  // namespace bdfd
