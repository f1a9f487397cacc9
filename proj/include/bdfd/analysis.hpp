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

#include <span>
#include <string_view>
#include <vector>

#include "bdfd/channel.hpp"
#include "bdfd/matrix_core.hpp"
#include "bdfd/transceiver.hpp"

namespace bdfd {

/// Coefficients of the square-QAM bit error approximation
///   alpha * erfc(sqrt(beta * rho)) + zeta * erfc(3 sqrt(beta * rho)),
/// for 4^b-QAM (2b bits per symbol). In this form rho is the SNR per bit;
/// use `ber_from_sinr` to start from a decision-point (per-symbol) SINR.
struct BerCoeffs {
  int b = 1;
  double alpha = 0.5;
  double beta = 1.0;
  double zeta = 0.0;

  static BerCoeffs for_qam(int b);
};

enum class ReceiverFamily { kZf, kMmse };

inline ReceiverFamily family_of(TransceiverKind k) {
  return is_zero_forcing(k) ? ReceiverFamily::kZf : ReceiverFamily::kMmse;
}

/// (WHF - B - I)(WHF - B - I)^H + W Rvv W^H, symmetrised.
CMatrix error_covariance(const ChannelModel& ch, const Transceiver& t);

/// Per-symbol decision-point SINR: 1/[R]_ii (ZF) or 1/[R]_ii - 1 (MMSE).
std::vector<double> sinr(const CMatrix& ree, ReceiverFamily family);

double ber_approx(double rho_per_bit, const BerCoeffs& coeffs);

/// BER approximation for a symbol-level SINR (divides by the 2b bits per symbol).
double ber_from_sinr(double sinr_per_symbol, const BerCoeffs& coeffs);

struct BerBound {
  double value = 0.0;
  /// False when the mean error variance is past the convexity threshold, in
  /// which case `value` is still computed but is not guaranteed to bound.
  bool in_convex_regime = true;
};

/// Jensen lower bound on the block-average BER given only tr(Ree) / M.
BerBound ber_lower_bound(double trace_ree, Eigen::Index m, const BerCoeffs& coeffs, ReceiverFamily family);

/// Gaussian mutual information log2 det(I + F^H H^H Rvv^{-1} H F), bits per block.
double gmi(const ChannelModel& ch, const CMatrix& f);

enum class OptimalDesign { kZfBdfd, kMmseBdfd, kZfLinear, kMmseLinear };

std::string_view to_string(OptimalDesign d);

/// Optimal MSE of each design family in terms of the M largest eigenvalues.
///
/// Valid only when p0 is large enough that every one of the M modes is
/// loaded by both the waterfilling and the linear-MMSE allocation; otherwise
/// throws RegimeViolation. The linear-MMSE value is the bias-compensated MSE
/// e/(1-e) of the common per-symbol error variance e.
double closed_form_mse(OptimalDesign kind, std::span<const double> lambdas, const DesignSpec& spec);

struct MseReport {
  CMatrix ree;
  double arithmetic_mse = 0.0;
  double geometric_mse = 0.0;
  std::vector<double> per_element_sinr;
};

MseReport mse_report(const CMatrix& ree, ReceiverFamily family);

}  // namespace bdfd
