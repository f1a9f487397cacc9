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

#include "bdfd/analysis.hpp"

#include <cmath>
#include <string>

#include "bdfd/error.hpp"

namespace bdfd {

BerCoeffs BerCoeffs::for_qam(int b) {
  if (b < 1) throw Error(ErrorKind::kInvalidInput, "QAM order must have b >= 1");
  const double root = std::ldexp(1.0, b);  // sqrt(4^b)
  const double db = static_cast<double>(b);
  return BerCoeffs{b, (root - 1.0) / (db * root), 3.0 * db / (root * root - 1.0), (root - 2.0) / (db * root)};
}

CMatrix error_covariance(const ChannelModel& ch, const Transceiver& t) {
  validate(ch);
  const Eigen::Index m = t.f.cols();
  if (t.f.rows() != ch.tx_dim() || t.w.rows() != m || t.w.cols() != ch.rx_dim() || t.b.rows() != m ||
      t.b.cols() != m) {
    throw Error(ErrorKind::kInvalidInput, "transceiver dimensions do not match the channel");
  }
  const CMatrix residual = t.w * ch.h * t.f - t.b - CMatrix::Identity(m, m);
  return hermitian_part(residual * residual.adjoint() + t.w * ch.rvv * t.w.adjoint());
}

std::vector<double> sinr(const CMatrix& ree, ReceiverFamily family) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(ree.rows()));
  for (Eigen::Index i = 0; i < ree.rows(); ++i) {
    const double d = ree(i, i).real();
    if (!(d > 0.0) || !std::isfinite(d)) {
      throw Error(ErrorKind::kInvalidInput, "error variance must be positive and finite");
    }
    if (family == ReceiverFamily::kMmse) {
      if (!(d < 1.0)) throw Error(ErrorKind::kInvalidInput, "MMSE error variance must be below 1");
      out.push_back(1.0 / d - 1.0);
    } else {
      out.push_back(1.0 / d);
    }
  }
  return out;
}

double ber_approx(double rho_per_bit, const BerCoeffs& coeffs) {
  const double x = std::sqrt(coeffs.beta * std::max(rho_per_bit, 0.0));
  return coeffs.alpha * std::erfc(x) + coeffs.zeta * std::erfc(3.0 * x);
}

double ber_from_sinr(double sinr_per_symbol, const BerCoeffs& coeffs) {
  return ber_approx(sinr_per_symbol / (2.0 * coeffs.b), coeffs);
}

BerBound ber_lower_bound(double trace_ree, Eigen::Index m, const BerCoeffs& coeffs, ReceiverFamily family) {
  if (m < 1 || !(trace_ree > 0.0)) throw Error(ErrorKind::kInvalidInput, "ber_lower_bound needs tr(Ree) > 0");
  const double mean = trace_ree / static_cast<double>(m);
  const double rho = family == ReceiverFamily::kZf ? 1.0 / mean : std::max(1.0 / mean - 1.0, 0.0);
  // erfc(sqrt(beta'/x)) is convex in x for x < 2 beta'/3, beta' = beta / (2b).
  const double threshold = 2.0 * (coeffs.beta / (2.0 * coeffs.b)) / 3.0;
  return BerBound{ber_from_sinr(rho, coeffs), mean < threshold};
}

double gmi(const ChannelModel& ch, const CMatrix& f) {
  validate(ch);
  if (f.rows() != ch.tx_dim()) throw Error(ErrorKind::kInvalidInput, "precoder must have K rows");
  const CMatrix gram = whitened_gram(ch).gram;
  const CMatrix a = hermitian_part(CMatrix::Identity(f.cols(), f.cols()) + f.adjoint() * gram * f);
  Eigen::LLT<CMatrix> llt(a);
  if (llt.info() != Eigen::Success) throw Error(ErrorKind::kNumericalFailure, "gmi: factorisation failed");
  double log_det = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) log_det += 2.0 * std::log(llt.matrixL()(i, i).real());
  return log_det / std::log(2.0);
}

std::string_view to_string(OptimalDesign d) {
  switch (d) {
    case OptimalDesign::kZfBdfd: return "OPT_ZF_BDFD";
    case OptimalDesign::kMmseBdfd: return "OPT_MMSE_BDFD";
    case OptimalDesign::kZfLinear: return "OPT_ZF_LINEAR";
    case OptimalDesign::kMmseLinear: return "OPT_MMSE_LINEAR";
  }
  return "?";
}

double closed_form_mse(OptimalDesign kind, std::span<const double> lambdas, const DesignSpec& spec) {
  const Eigen::Index m = spec.m;
  if (static_cast<Eigen::Index>(lambdas.size()) < m) {
    throw Error(ErrorKind::kRegimeViolation, "fewer than M significant eigenvalues");
  }
  const WaterfillResult wf = waterfill(lambdas, spec);
  if (wf.q < m) {
    throw Error(ErrorKind::kRegimeViolation, "waterfilling leaves " + std::to_string(m - wf.q) + " modes unloaded");
  }
  const LinearMmseAllocation lin = linear_mmse_allocation(lambdas, spec);
  if (lin.k < m) {
    throw Error(ErrorKind::kRegimeViolation, "linear MMSE allocation leaves modes unloaded");
  }

  const double dm = static_cast<double>(m);
  double log_sum = 0.0;
  double inv_sum = 0.0;
  double inv_sqrt_sum = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    const double l = lambdas[static_cast<std::size_t>(i)];
    log_sum += std::log(l);
    inv_sum += 1.0 / l;
    inv_sqrt_sum += 1.0 / std::sqrt(l);
  }
  const double geo_inv = std::exp(-log_sum / dm);  // |Lambda_M|^{-1/M}

  switch (kind) {
    case OptimalDesign::kZfBdfd: return dm / spec.p0 * geo_inv;
    case OptimalDesign::kMmseBdfd: return dm / (spec.p0 + inv_sum) * geo_inv;
    case OptimalDesign::kZfLinear: return inv_sqrt_sum * inv_sqrt_sum / (dm * spec.p0);
    case OptimalDesign::kMmseLinear: {
      const double t2 = inv_sqrt_sum * inv_sqrt_sum;
      return t2 / (dm * (spec.p0 + inv_sum) - t2);
    }
  }
  throw Error(ErrorKind::kInvalidInput, "unknown design");
}

MseReport mse_report(const CMatrix& ree, ReceiverFamily family) {
  MseReport out;
  out.ree = hermitian_part(ree);
  const double m = static_cast<double>(ree.rows());
  out.arithmetic_mse = out.ree.trace().real() / m;
  const EigenSystem eig = hermitian_eig(out.ree);
  double log_sum = 0.0;
  bool singular = false;
  for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
    if (!(eig.values(i) > 0.0)) {
      singular = true;
      break;
    }
    log_sum += std::log(eig.values(i));
  }
  out.geometric_mse = singular ? 0.0 : std::exp(log_sum / m);
  out.per_element_sinr = sinr(out.ree, family);
  return out;
}

}  // namespace bdfd
