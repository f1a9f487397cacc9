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

#include "bdfd/random.hpp"

#include <cmath>
#include <numbers>

namespace bdfd {
namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

RandomStream::RandomStream(std::uint64_t master_seed, std::uint64_t index, StreamPurpose purpose) {
  std::uint64_t k = mix64(master_seed + kGolden);
  k = mix64(k ^ (index + 0x632be59bd9b4e019ULL));
  k = mix64(k ^ static_cast<std::uint64_t>(purpose));
  key_ = k;
}

std::uint64_t RandomStream::next_u64() { return mix64(key_ + (++counter_) * kGolden); }

double RandomStream::uniform() {
  return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
}

double RandomStream::standard_normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_normal_;
  }
  const double radius = std::sqrt(-2.0 * std::log(uniform()));
  const double angle = 2.0 * std::numbers::pi * uniform();
  spare_normal_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

Complex RandomStream::complex_normal(double variance) {
  const double scale = std::sqrt(0.5 * variance);
  const double re = standard_normal();
  const double im = standard_normal();
  return {scale * re, scale * im};
}

int RandomStream::bit() {
  if (bits_left_ == 0) {
    bit_buffer_ = next_u64();
    bits_left_ = 64;
  }
  const int out = static_cast<int>(bit_buffer_ & 1U);
  bit_buffer_ >>= 1;
  --bits_left_;
  return out;
}

CMatrix complex_gaussian_matrix(Eigen::Index rows, Eigen::Index cols, RandomStream& rng, double variance) {
  CMatrix out(rows, cols);
  // Row-major fill order is part of the stream contract.
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) out(i, j) = rng.complex_normal(variance);
  return out;
}

}  // namespace bdfd
