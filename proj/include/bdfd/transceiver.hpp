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
#include <string>
#include <string_view>
#include <vector>

#include "bdfd/channel.hpp"
#include "bdfd/matrix_core.hpp"

namespace bdfd {

enum class TransceiverKind { kZfBdfd, kMmseBdfd, kLinearZf, kLinearMmse };

std::string_view to_string(TransceiverKind kind);
TransceiverKind parse_transceiver_kind(std::string_view name);

inline bool is_zero_forcing(TransceiverKind k) {
  return k == TransceiverKind::kZfBdfd || k == TransceiverKind::kLinearZf;
}
inline bool uses_feedback(TransceiverKind k) {
  return k == TransceiverKind::kZfBdfd || k == TransceiverKind::kMmseBdfd;
}

struct DesignSpec {
  Eigen::Index m = 1;  // symbols per block
  double p0 = 1.0;     // total transmit power per block
};

/// Precoder F, feedforward W and strictly upper triangular feedback B.
///
/// The receiver forms z = W y and decides symbols M..1, subtracting
/// B * (earlier decisions) from each. `predicted_ree` is the decision-point
/// error covariance assuming correct feedback.
struct Transceiver {
  CMatrix f;  // K x M
  CMatrix w;  // M x P
  CMatrix b;  // M x M
  TransceiverKind kind = TransceiverKind::kZfBdfd;
  CMatrix predicted_ree;
  Eigen::Index q_active = 0;
  std::vector<std::string> warnings;

  Eigen::Index block_size() const { return f.cols(); }
};

struct WaterfillResult {
  Eigen::Index r = 0;        // largest index meeting the water-level condition
  Eigen::Index q = 0;        // min(r, M): modes that receive power
  std::vector<double> phi;   // per-mode amplitudes, length q

  double power(std::size_t i) const { return phi[i] * phi[i]; }
};

/// Log-det maximising power allocation over descending eigenvalues.
WaterfillResult waterfill(std::span<const double> lambdas, const DesignSpec& spec);

/// Minimum-MSE jointly designed transmitter/receiver for the zero-forcing
/// feedback detector. Throws RankDeficient if H^H Rvv^{-1} H has fewer than M
/// significant eigenvalues.
Transceiver design_zf_bdfd(const ChannelModel& ch, const DesignSpec& spec);

/// Minimum-MSE jointly designed transmitter/receiver for the MMSE feedback
/// detector. The precoder also maximises log det(I + F^H H^H Rvv^{-1} H F).
Transceiver design_mmse_bdfd(const ChannelModel& ch, const DesignSpec& spec);

/// Best receiver of the requested kind for a fixed precoder.
Transceiver receiver_for_precoder(const ChannelModel& ch, const CMatrix& f, TransceiverKind kind);

enum class BaselineKind { kIdentity, kDft, kOptLinearZf, kOptLinearMmse };

std::string_view to_string(BaselineKind kind);

CMatrix baseline_precoder(BaselineKind kind, const ChannelModel& ch, const DesignSpec& spec);

/// Normalised M x M DFT matrix, D_{mn} = exp(-2 pi i m n / M) / sqrt(M).
CMatrix dft_matrix(Eigen::Index m);

/// Power loading of the minimum-MSE linear MMSE precoder.
struct LinearMmseAllocation {
  Eigen::Index ell = 0;
  Eigen::Index k = 0;            // min(ell, M)
  std::vector<double> upsilon2;  // per-mode power, length k
};

LinearMmseAllocation linear_mmse_allocation(std::span<const double> lambdas, const DesignSpec& spec);

/// Descending eigenvalues of H^H Rvv^{-1} H that exceed the rank threshold.
std::vector<double> significant_eigenvalues(const RVector& values);

}  // namespace bdfd
