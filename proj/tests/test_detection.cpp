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

#include <gtest/gtest.h>

#include <bit>
#include <cmath>

#include "bdfd/detection.hpp"
#include "bdfd/error.hpp"
#include "bdfd/random.hpp"
#include "test_util.hpp"

namespace bdfd {
namespace {

using testing::TestRng;

std::vector<Bit> random_bits(std::size_t n, std::uint64_t seed) {
  RandomStream rng(seed, 0, StreamPurpose::kData);
  std::vector<Bit> bits(n);
  for (auto& b : bits) b = static_cast<Bit>(rng.bit());
  return bits;
}

TEST(Constellation, QpskPoints) {
  const Constellation c(1);
  ASSERT_EQ(c.points().size(), 4U);
  const double a = 1.0 / std::sqrt(2.0);
  for (const auto& p : c.points()) {
    EXPECT_NEAR(std::abs(p.real()), a, 1e-15);
    EXPECT_NEAR(std::abs(p.imag()), a, 1e-15);
  }
}

TEST(Constellation, SixteenQamGridAndEnergy) {
  const Constellation c(2);
  ASSERT_EQ(c.points().size(), 16U);
  double energy = 0.0;
  for (const auto& p : c.points()) {
    energy += std::norm(p);
    for (double x : {p.real(), p.imag()}) {
      const double level = std::abs(x) * std::sqrt(10.0);
      EXPECT_TRUE(std::abs(level - 1.0) < 1e-12 || std::abs(level - 3.0) < 1e-12) << x;
    }
  }
  EXPECT_NEAR(energy / 16.0, 1.0, 1e-14);
  for (int b = 3; b <= 4; ++b) {
    const Constellation big(b);
    double e = 0.0;
    for (const auto& p : big.points()) e += std::norm(p);
    EXPECT_NEAR(e / static_cast<double>(big.points().size()), 1.0, 1e-13);
  }
}

TEST(Constellation, GrayNeighboursDifferByOneBit) {
  for (int b = 1; b <= 3; ++b) {
    const Constellation c(b);
    const auto& pts = c.points();
    const auto& labels = c.labels();
    for (std::size_t i = 0; i < pts.size(); ++i) {
      for (std::size_t j = 0; j < pts.size(); ++j) {
        if (std::abs(std::abs(pts[i] - pts[j]) - c.spacing()) < 1e-12) {
          EXPECT_EQ(std::popcount(labels[i] ^ labels[j]), 1);
        }
      }
    }
  }
}

TEST(QamMap, RoundTripNoiseless) {
  for (int b = 1; b <= 4; ++b) {
    const Constellation c(b);
    const std::vector<Bit> bits = random_bits(static_cast<std::size_t>(c.bits_per_symbol()) * 500, 100 + b);
    const std::vector<Complex> sym = qam_map(bits, c);
    std::vector<Bit> back;
    for (const auto& s : sym) append_label_bits(qam_slice(s, c).label, c.bits_per_symbol(), back);
    EXPECT_EQ(back, bits);
  }
}

TEST(QamMap, RejectsPartialSymbol) {
  const Constellation c(1);
  const std::vector<Bit> bits{1, 0, 1};
  EXPECT_THROW(qam_map(bits, c), Error);
}

TEST(QamSlice, TieAndPerturbation) {
  const Constellation c(1);
  const double a = 1.0 / std::sqrt(2.0);
  const auto d0 = qam_slice(Complex(0.0, 0.0), c);
  EXPECT_NEAR(d0.symbol.real(), -a, 1e-15);
  EXPECT_NEAR(d0.symbol.imag(), -a, 1e-15);
  EXPECT_EQ(d0.label, c.labels()[0]);
  TestRng rng(51);
  for (int b = 1; b <= 3; ++b) {
    const Constellation cb(b);
    for (std::size_t i = 0; i < cb.points().size(); ++i) {
      const Complex p = cb.points()[i];
      EXPECT_EQ(qam_slice(p, cb).symbol, p);
      const double r = 0.49 * cb.spacing() / std::sqrt(2.0);
      const Complex z = p + Complex(rng.uniform(-r, r), rng.uniform(-r, r));
      const auto d = qam_slice(z, cb);
      EXPECT_EQ(d.symbol, p);
      EXPECT_EQ(d.label, cb.labels()[i]);
    }
  }
}

TEST(BdfdDetect, NoiselessZfRecoversSymbols) {
  TestRng rng(52);
  const Constellation c(2);
  for (int trial = 0; trial < 20; ++trial) {
    const ChannelModel ch{rng.matrix(5, 4), rng.pd(5, 0.5)};
    const Transceiver t = design_zf_bdfd(ch, DesignSpec{4, 4.0});
    const std::vector<Bit> bits = random_bits(16, 200 + trial);
    const std::vector<Complex> s = qam_map(bits, c);
    const CVector sv = Eigen::Map<const CVector>(s.data(), 4);
    const CVector y = ch.h * t.f * sv;
    for (auto mode : {FeedbackMode::kGenie, FeedbackMode::kReal}) {
      const DetectionResult r = bdfd_detect(y, t, c, mode, std::span<const Complex>(s));
      EXPECT_EQ(r.decided_bits, bits);
      for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(r.decided_symbols[i], s[i]);
    }
  }
}

TEST(BdfdDetect, LinearKindSlicesElementwise) {
  TestRng rng(53);
  const Constellation c(1);
  const ChannelModel ch{rng.matrix(3, 3), CMatrix::Identity(3, 3)};
  const Transceiver t =
      receiver_for_precoder(ch, std::sqrt(1.0) * CMatrix::Identity(3, 3), TransceiverKind::kLinearMmse);
  for (int trial = 0; trial < 50; ++trial) {
    const CVector y = rng.matrix(3, 1);
    const CVector z = t.w * y;
    const DetectionResult r = bdfd_detect(y, t, c, FeedbackMode::kReal);
    for (int i = 0; i < 3; ++i) EXPECT_EQ(r.decided_symbols[static_cast<std::size_t>(i)], qam_slice(z(i), c).symbol);
  }
}

TEST(BdfdDetect, GenieErrorCovarianceMatchesPrediction) {
  TestRng rng(54);
  const Constellation c(1);
  const ChannelModel ch{rng.matrix(4, 3), 0.2 * CMatrix::Identity(4, 4)};
  for (const Transceiver& t : {design_zf_bdfd(ch, DesignSpec{3, 3.0}), design_mmse_bdfd(ch, DesignSpec{3, 3.0})}) {
    RandomStream noise(5, 0, StreamPurpose::kNoise);
    RandomStream data(5, 0, StreamPurpose::kData);
    const int draws = 100000;
    std::vector<double> sum(3, 0.0);
    std::vector<double> sum_sq(3, 0.0);
    for (int n = 0; n < draws; ++n) {
      std::vector<Bit> bits(6);
      for (auto& b : bits) b = static_cast<Bit>(data.bit());
      const std::vector<Complex> s = qam_map(bits, c);
      const CVector sv = Eigen::Map<const CVector>(s.data(), 3);
      const CVector y = ch.h * t.f * sv + complex_gaussian_matrix(4, 1, noise, 0.2);
      // Genie decision statistic with correct feedback.
      const CVector e = t.w * y - t.b * sv - sv;
      for (int i = 0; i < 3; ++i) {
        sum[static_cast<std::size_t>(i)] += std::norm(e(i));
        sum_sq[static_cast<std::size_t>(i)] += std::norm(e(i)) * std::norm(e(i));
      }
    }
    for (int i = 0; i < 3; ++i) {
      const double mean = sum[static_cast<std::size_t>(i)] / draws;
      const double se = std::sqrt((sum_sq[static_cast<std::size_t>(i)] / draws - mean * mean) / draws);
      EXPECT_NEAR(mean, t.predicted_ree(i, i).real(), 3.0 * se) << to_string(t.kind) << " element " << i;
    }
  }
}

TEST(BdfdDetect, ForcedErrorOnlyAffectsLaterDecisions) {
  TestRng rng(55);
  const Constellation c(1);
  for (int trial = 0; trial < 20; ++trial) {
    const ChannelModel ch{rng.matrix(4, 4), 0.1 * CMatrix::Identity(4, 4)};
    const Transceiver t = design_mmse_bdfd(ch, DesignSpec{4, 400.0});
    ASSERT_EQ(t.q_active, 4);
    const CVector y = rng.matrix(4, 1);
    const DetectionResult base = bdfd_detect(y, t, c, FeedbackMode::kReal);
    const Eigen::Index m = rng.integer(0, 3);
    // Perturbation d with W d = 5 e_m moves only the m-th decision statistic.
    CVector em = CVector::Zero(4);
    em(m) = 5.0;
    const CVector d = t.w.adjoint() * (t.w * t.w.adjoint()).inverse() * em;
    ASSERT_LT((t.w * d - em).norm(), 1e-9) << "trial " << trial;
    const DetectionResult hit = bdfd_detect(y + d, t, c, FeedbackMode::kReal);
    for (Eigen::Index i = m + 1; i < 4; ++i) {
      EXPECT_EQ(hit.decided_symbols[static_cast<std::size_t>(i)], base.decided_symbols[static_cast<std::size_t>(i)]);
    }
  }
}

TEST(BdfdDetect, UnbiasedScalingFixesMmseBiasForQam) {
  // Scalar channel: MMSE output is (1 - e) s + noise; without rescaling the
  // outer 16-QAM levels are pulled inwards.
  const ChannelModel ch = with_white_noise(CMatrix::Identity(1, 1), 1.0);
  const Transceiver t = receiver_for_precoder(ch, CMatrix::Identity(1, 1), TransceiverKind::kLinearMmse);
  const Constellation c(2);
  const Complex outer(3.0 / std::sqrt(10.0), 3.0 / std::sqrt(10.0));
  CVector y(1);
  y(0) = outer;
  DetectOptions opts;
  opts.unbiased_scaling = true;
  EXPECT_EQ(bdfd_detect(y, t, c, FeedbackMode::kReal, std::nullopt, opts).decided_symbols[0], outer);
  EXPECT_NE(bdfd_detect(y, t, c, FeedbackMode::kReal).decided_symbols[0], outer);
}

TEST(BdfdDetect, GenieNeedsTruth) {
  const ChannelModel ch = with_white_noise(CMatrix::Identity(2, 2), 1.0);
  const Transceiver t = design_zf_bdfd(ch, DesignSpec{2, 2.0});
  EXPECT_THROW(bdfd_detect(CVector::Zero(2), t, Constellation(1), FeedbackMode::kGenie), Error);
  EXPECT_THROW(bdfd_detect(CVector::Zero(3), t, Constellation(1), FeedbackMode::kReal), Error);
}

TEST(CountBitErrors, Fixtures) {
  const std::vector<Bit> a{0, 1, 1, 0, 1, 0, 0, 1};
  std::vector<Bit> comp(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) comp[i] = static_cast<Bit>(1 - a[i]);
  std::vector<Bit> three = a;
  three[0] ^= 1;
  three[4] ^= 1;
  three[7] ^= 1;
  EXPECT_EQ(count_bit_errors(a, a).errors, 0);
  EXPECT_EQ(count_bit_errors(a, a).total, 8);
  EXPECT_EQ(count_bit_errors(comp, a).errors, 8);
  EXPECT_EQ(count_bit_errors(three, a).errors, 3);
  EXPECT_THROW(count_bit_errors(std::vector<Bit>{1}, a), Error);
}

TEST(FeedbackMode, Parse) {
  EXPECT_EQ(parse_feedback_mode("GENIE"), FeedbackMode::kGenie);
  EXPECT_EQ(parse_feedback_mode("REAL"), FeedbackMode::kReal);
  EXPECT_THROW(parse_feedback_mode("genie"), Error);
}

}  // namespace
}  // namespace bdfd
