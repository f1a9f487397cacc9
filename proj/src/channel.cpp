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

#include "bdfd/channel.hpp"

#include <cmath>

#include "bdfd/error.hpp"

namespace bdfd {

ChannelModel with_white_noise(CMatrix h, double sigma2) {
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) {
    throw Error(ErrorKind::kInvalidInput, "noise variance must be positive and finite");
  }
  const Eigen::Index p = h.rows();
  return ChannelModel{std::move(h), sigma2 * CMatrix::Identity(p, p)};
}

void validate(const ChannelModel& ch) {
  if (ch.h.rows() < 1 || ch.h.cols() < 1) throw Error(ErrorKind::kInvalidInput, "channel matrix is empty");
  if (ch.rvv.rows() != ch.h.rows() || ch.rvv.cols() != ch.h.rows()) {
    throw Error(ErrorKind::kInvalidInput, "noise covariance must be P x P");
  }
  require_finite(ch.h, "channel");
  require_finite(ch.rvv, "noise covariance");
}

FirTaps FirTaps::unit_energy(std::vector<Complex> taps) {
  double energy = 0.0;
  for (const auto& t : taps) energy += std::norm(t);
  if (!(energy > 0.0)) throw Error(ErrorKind::kInvalidInput, "FIR taps have zero energy");
  const double scale = 1.0 / std::sqrt(energy);
  for (auto& t : taps) t *= scale;
  return FirTaps{std::move(taps), true};
}

FirTaps random_fir_taps(std::size_t order, RandomStream& rng, bool normalize) {
  std::vector<Complex> taps(order + 1);
  for (auto& t : taps) t = rng.complex_normal(1.0);
  if (normalize) return FirTaps::unit_energy(std::move(taps));
  return FirTaps{std::move(taps), false};
}

CMatrix fir_zero_padded_channel(const FirTaps& taps, Eigen::Index k) {
  if (taps.taps.empty()) throw Error(ErrorKind::kInvalidInput, "FIR taps are empty");
  if (k < 1) throw Error(ErrorKind::kInvalidInput, "block length must be >= 1");
  const auto len = static_cast<Eigen::Index>(taps.taps.size());
  CMatrix h = CMatrix::Zero(k + len - 1, k);
  for (Eigen::Index j = 0; j < k; ++j)
    for (Eigen::Index l = 0; l < len; ++l) h(j + l, j) = taps.taps[static_cast<std::size_t>(l)];
  return h;
}

CMatrix circulant_channel(const FirTaps& taps, Eigen::Index k) {
  if (taps.taps.empty()) throw Error(ErrorKind::kInvalidInput, "FIR taps are empty");
  const auto len = static_cast<Eigen::Index>(taps.taps.size());
  if (k < len) throw Error(ErrorKind::kInvalidInput, "circulant block shorter than the impulse response");
  CMatrix h = CMatrix::Zero(k, k);
  for (Eigen::Index j = 0; j < k; ++j)
    for (Eigen::Index l = 0; l < len; ++l) h((j + l) % k, j) = taps.taps[static_cast<std::size_t>(l)];
  return h;
}

CMatrix rayleigh_mimo_channel(Eigen::Index p, Eigen::Index k, RandomStream& rng) {
  if (p < 1 || k < 1) throw Error(ErrorKind::kInvalidInput, "antenna counts must be >= 1");
  return complex_gaussian_matrix(p, k, rng, 1.0);
}

WhitenedGram whitened_gram(const ChannelModel& ch) {
  validate(ch);
  WhitenedGram out;
  out.rvv_inv_sqrt = inv_sqrt_pd(ch.rvv);
  out.h_breve = out.rvv_inv_sqrt * ch.h;
  out.gram = hermitian_part(out.h_breve.adjoint() * out.h_breve);
  return out;
}

}  // namespace bdfd
