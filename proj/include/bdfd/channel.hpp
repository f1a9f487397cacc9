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

#include <vector>

#include "bdfd/matrix_core.hpp"
#include "bdfd/random.hpp"

namespace bdfd {

/// y = H u + v with E[v v^H] = rvv.
struct ChannelModel {
  CMatrix h;    // P x K
  CMatrix rvv;  // P x P, Hermitian positive definite

  Eigen::Index rx_dim() const { return h.rows(); }
  Eigen::Index tx_dim() const { return h.cols(); }
};

/// Attaches white noise of per-sample variance sigma2.
ChannelModel with_white_noise(CMatrix h, double sigma2);

/// Validates dimensions, finiteness and Hermitian-ness of rvv.
void validate(const ChannelModel& ch);

struct FirTaps {
  std::vector<Complex> taps;  // h[0..L]
  bool normalized = false;    // sum |h[l]|^2 == 1

  std::size_t order() const { return taps.empty() ? 0 : taps.size() - 1; }

  /// Copy of `taps` scaled to unit energy, flagged as normalized.
  static FirTaps unit_energy(std::vector<Complex> taps);
};

/// L+1 i.i.d. CN(0,1) taps, optionally normalised to unit energy.
FirTaps random_fir_taps(std::size_t order, RandomStream& rng, bool normalize);

/// (K+L) x K tall lower-triangular Toeplitz matrix of a zero-padded block.
CMatrix fir_zero_padded_channel(const FirTaps& taps, Eigen::Index k);

/// K x K circulant with first column (h[0..L], 0...0) (cyclic-prefix block).
CMatrix circulant_channel(const FirTaps& taps, Eigen::Index k);

/// P x K matrix of i.i.d. unit-variance circular Gaussian gains.
CMatrix rayleigh_mimo_channel(Eigen::Index p, Eigen::Index k, RandomStream& rng);

struct WhitenedGram {
  CMatrix h_breve;       // rvv^{-1/2} H
  CMatrix gram;          // H^H rvv^{-1} H
  CMatrix rvv_inv_sqrt;  // rvv^{-1/2}
};

WhitenedGram whitened_gram(const ChannelModel& ch);

}  // namespace bdfd
