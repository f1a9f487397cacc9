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
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "bdfd/matrix_core.hpp"
#include "bdfd/transceiver.hpp"

namespace bdfd {

using Bit = std::uint8_t;

/// Square 4^b-QAM, unit average energy, Gray labelled independently per axis.
///
/// A symbol carries 2b bits: the first b select the in-phase level, the next b
/// the quadrature level (most significant bit first).
class Constellation {
 public:
  explicit Constellation(int bits_per_axis);

  int bits_per_axis() const { return b_; }
  int bits_per_symbol() const { return 2 * b_; }
  int levels_per_axis() const { return 1 << b_; }
  /// Spacing between adjacent amplitude levels.
  double spacing() const { return 2.0 * half_step_; }

  const std::vector<Complex>& points() const { return points_; }
  /// Label of points()[i] as an integer (first bit is the MSB).
  const std::vector<unsigned>& labels() const { return labels_; }

  Complex map_label(unsigned label) const;

  struct Decision {
    Complex symbol;
    unsigned label;
  };

  /// Nearest point; ties go to the smaller in-phase then smaller quadrature level.
  Decision slice(Complex z) const;

 private:
  double axis_level(int index) const;
  int nearest_index(double x) const;

  int b_;
  double half_step_;
  std::vector<unsigned> gray_;   // level index -> gray code
  std::vector<int> ungray_;      // gray code -> level index
  std::vector<Complex> points_;
  std::vector<unsigned> labels_;
};

std::vector<Complex> qam_map(std::span<const Bit> bits, const Constellation& c);

/// Scalar decision device; same rule as Constellation::slice.
Constellation::Decision qam_slice(Complex z, const Constellation& c);

void append_label_bits(unsigned label, int count, std::vector<Bit>& out);

enum class FeedbackMode { kGenie, kReal };

std::string_view to_string(FeedbackMode mode);
FeedbackMode parse_feedback_mode(std::string_view name);

struct DetectionResult {
  std::vector<Complex> decided_symbols;
  std::vector<Bit> decided_bits;
  FeedbackMode mode = FeedbackMode::kReal;
};

struct DetectOptions {
  /// Scale each decision statistic by 1/(1 - [Ree]_mm) before slicing to
  /// remove the MMSE bias. Off by default.
  bool unbiased_scaling = false;
};

/// Sequential intra-block detection from symbol M down to 1.
///
/// In kGenie mode the feedback uses `true_symbols` (correct past decisions);
/// in kReal mode it uses the detector's own decisions. Feedback state is local
/// to the call, so every block is detected independently.
DetectionResult bdfd_detect(const CVector& y, const Transceiver& t, const Constellation& c, FeedbackMode mode,
                            std::optional<std::span<const Complex>> true_symbols = std::nullopt,
                            const DetectOptions& options = {});

struct BitErrorCount {
  std::int64_t errors = 0;
  std::int64_t total = 0;
};

BitErrorCount count_bit_errors(std::span<const Bit> decided, std::span<const Bit> truth);

}  // namespace bdfd
