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

#include <cstdint>

#include "bdfd/matrix_core.hpp"

namespace bdfd {

/// Independent stream families. Distinct tags give disjoint streams for the
/// same (seed, index), so e.g. channel draws never depend on data volume.
enum class StreamPurpose : std::uint64_t {
  kChannel = 0x43484e4cULL,
  kData = 0x44415441ULL,
  kNoise = 0x4e4f4953ULL,
  kAux = 0x41555858ULL,
};

/// Counter-based generator keyed by (master_seed, index, purpose).
///
/// Output n is splitmix64(key + n * golden), so stream contents depend only on
/// the key and the draw count: a trial replays identically no matter which
/// thread runs it or in what order. Gaussian draws use Box-Muller on our own
/// uniforms, keeping results identical across standard libraries.
class RandomStream {
 public:
  RandomStream(std::uint64_t master_seed, std::uint64_t index, StreamPurpose purpose);

  std::uint64_t next_u64();
  /// Uniform on (0, 1].
  double uniform();
  double standard_normal();
  /// Circular complex Gaussian with E|z|^2 = variance.
  Complex complex_normal(double variance = 1.0);
  int bit();

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
  std::uint64_t bit_buffer_ = 0;
  int bits_left_ = 0;
};

/// Matrix of i.i.d. CN(0, variance) entries.
CMatrix complex_gaussian_matrix(Eigen::Index rows, Eigen::Index cols, RandomStream& rng, double variance = 1.0);

}  // namespace bdfd
