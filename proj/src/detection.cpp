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

#include "bdfd/detection.hpp"

#include <cmath>
#include <string>

#include "bdfd/error.hpp"

namespace bdfd {

Constellation::Constellation(int bits_per_axis) : b_(bits_per_axis) {
  if (b_ < 1 || b_ > 8) throw Error(ErrorKind::kInvalidInput, "QAM order must satisfy 1 <= b <= 8");
  const int levels = levels_per_axis();
  // Levels (2i - (L-1)) * d with d^2 = 3 / (2 (4^b - 1)) give unit energy.
  half_step_ = std::sqrt(3.0 / (2.0 * (static_cast<double>(levels) * levels - 1.0)));

  gray_.resize(static_cast<std::size_t>(levels));
  ungray_.resize(static_cast<std::size_t>(levels));
  for (int i = 0; i < levels; ++i) {
    const unsigned g = static_cast<unsigned>(i) ^ (static_cast<unsigned>(i) >> 1);
    gray_[static_cast<std::size_t>(i)] = g;
    ungray_[g] = i;
  }

  for (int qi = 0; qi < levels; ++qi) {
    for (int ii = 0; ii < levels; ++ii) {
      points_.emplace_back(axis_level(ii), axis_level(qi));
      labels_.push_back((gray_[static_cast<std::size_t>(ii)] << b_) | gray_[static_cast<std::size_t>(qi)]);
    }
  }
}

double Constellation::axis_level(int index) const {
  return static_cast<double>(2 * index - (levels_per_axis() - 1)) * half_step_;
}

int Constellation::nearest_index(double x) const {
  // Level i is nearest when x lies in ((2i - L) d, (2i - L + 2) d]; the
  // closed upper end sends exact midpoints to the smaller level.
  const int levels = levels_per_axis();
  const double pos = (x / half_step_ + static_cast<double>(levels)) / 2.0;
  int idx = static_cast<int>(std::ceil(pos)) - 1;
  if (idx < 0) idx = 0;
  if (idx >= levels) idx = levels - 1;
  return idx;
}

Complex Constellation::map_label(unsigned label) const {
  const unsigned mask = (1U << b_) - 1U;
  const int ii = ungray_[(label >> b_) & mask];
  const int qi = ungray_[label & mask];
  return {axis_level(ii), axis_level(qi)};
}

Constellation::Decision Constellation::slice(Complex z) const {
  const int ii = nearest_index(z.real());
  const int qi = nearest_index(z.imag());
  return {Complex(axis_level(ii), axis_level(qi)),
          (gray_[static_cast<std::size_t>(ii)] << b_) | gray_[static_cast<std::size_t>(qi)]};
}

std::vector<Complex> qam_map(std::span<const Bit> bits, const Constellation& c) {
  const auto per = static_cast<std::size_t>(c.bits_per_symbol());
  if (bits.size() % per != 0) {
    throw Error(ErrorKind::kInvalidInput, "bit count is not a multiple of " + std::to_string(per));
  }
  std::vector<Complex> out;
  out.reserve(bits.size() / per);
  for (std::size_t s = 0; s < bits.size(); s += per) {
    unsigned label = 0;
    for (std::size_t k = 0; k < per; ++k) label = (label << 1) | (bits[s + k] & 1U);
    out.push_back(c.map_label(label));
  }
  return out;
}

Constellation::Decision qam_slice(Complex z, const Constellation& c) { return c.slice(z); }

void append_label_bits(unsigned label, int count, std::vector<Bit>& out) {
  for (int k = count - 1; k >= 0; --k) out.push_back(static_cast<Bit>((label >> k) & 1U));
}

std::string_view to_string(FeedbackMode mode) { return mode == FeedbackMode::kGenie ? "GENIE" : "REAL"; }

FeedbackMode parse_feedback_mode(std::string_view name) {
  if (name == "GENIE") return FeedbackMode::kGenie;
  if (name == "REAL") return FeedbackMode::kReal;
  throw Error(ErrorKind::kInvalidInput, "unknown feedback mode '" + std::string(name) + "'");
}

DetectionResult bdfd_detect(const CVector& y, const Transceiver& t, const Constellation& c, FeedbackMode mode,
                            std::optional<std::span<const Complex>> true_symbols, const DetectOptions& options) {
  const Eigen::Index m = t.w.rows();
  if (y.size() != t.w.cols()) throw Error(ErrorKind::kInvalidInput, "received block has wrong length");
  if (t.b.rows() != m || t.b.cols() != m) throw Error(ErrorKind::kInvalidInput, "feedback matrix must be M x M");
  if (mode == FeedbackMode::kGenie) {
    if (!true_symbols || static_cast<Eigen::Index>(true_symbols->size()) != m) {
      throw Error(ErrorKind::kInvalidInput, "genie feedback needs the M transmitted symbols");
    }
  }

  const CVector z = t.w * y;
  DetectionResult out;
  out.mode = mode;
  out.decided_symbols.assign(static_cast<std::size_t>(m), Complex{});
  std::vector<unsigned> labels(static_cast<std::size_t>(m), 0U);

  for (Eigen::Index idx = m - 1; idx >= 0; --idx) {
    Complex feedback{};
    for (Eigen::Index l = idx + 1; l < m; ++l) {
      const Complex past = mode == FeedbackMode::kGenie ? (*true_symbols)[static_cast<std::size_t>(l)]
                                                        : out.decided_symbols[static_cast<std::size_t>(l)];
      feedback += t.b(idx, l) * past;
    }
    Complex stat = z(idx) - feedback;
    if (options.unbiased_scaling && t.predicted_ree.rows() == m) {
      const double bias = 1.0 - t.predicted_ree(idx, idx).real();
      if (bias > 0.0) stat /= bias;
    }
    const auto d = c.slice(stat);
    out.decided_symbols[static_cast<std::size_t>(idx)] = d.symbol;
    labels[static_cast<std::size_t>(idx)] = d.label;
  }

  out.decided_bits.reserve(static_cast<std::size_t>(m * c.bits_per_symbol()));
  for (unsigned label : labels) append_label_bits(label, c.bits_per_symbol(), out.decided_bits);
  return out;
}

BitErrorCount count_bit_errors(std::span<const Bit> decided, std::span<const Bit> truth) {
  if (decided.size() != truth.size()) throw Error(ErrorKind::kInvalidInput, "bit sequences differ in length");
  BitErrorCount out;
  out.total = static_cast<std::int64_t>(truth.size());
  for (std::size_t i = 0; i < truth.size(); ++i) out.errors += (decided[i] & 1U) != (truth[i] & 1U);
  return out;
}

}  // namespace bdfd
