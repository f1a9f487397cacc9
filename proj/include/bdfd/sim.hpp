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
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "bdfd/channel.hpp"
#include "bdfd/detection.hpp"
#include "bdfd/transceiver.hpp"

namespace bdfd {

enum class Scenario { kFirZp, kMimo };

std::string_view to_string(Scenario s);
Scenario parse_scenario(std::string_view name);

enum class Scheme {
  kOptZfBdfd,
  kOptMmseBdfd,
  kIdentityZfBdfd,
  kIdentityMmseBdfd,
  kDftZfBdfd,
  kDftMmseBdfd,
  kOptLinearZf,
  kOptLinearMmse,
};

std::string_view to_string(Scheme s);
Scheme parse_scheme(std::string_view name);

/// Receiver structure a scheme is detected with.
TransceiverKind receiver_kind(Scheme s);

struct SimConfig {
  Scenario scenario = Scenario::kFirZp;
  // FIR_ZP: channel order L and tap normalisation; P is K + L.
  std::size_t fir_order = 4;
  bool normalize_taps = true;
  Eigen::Index p = 20;  // receive dimension
  Eigen::Index k = 16;  // transmit dimension
  Eigen::Index m = 16;  // symbols per block
  int b = 1;            // 4^b-QAM
  std::vector<Scheme> schemes;
  std::vector<double> snr_db_grid;
  double p0 = 16.0;
  std::int64_t channels_per_point = 500;
  std::int64_t blocks_per_channel = 20;
  std::uint64_t master_seed = 1;
  std::vector<FeedbackMode> feedback_modes{FeedbackMode::kGenie, FeedbackMode::kReal};
};

/// Throws InvalidInput describing the first inconsistency.
void validate(const SimConfig& cfg);

/// Configuration of one of the named desk-scale scenarios.
SimConfig scenario_preset(std::string_view name);

/// Noise variance for an SNR defined as (p0 / M) / sigma^2.
double noise_variance(const SimConfig& cfg, double snr_db);

/// Channel realisation `index` of the sweep; depends only on the seed, the
/// index and the channel parameters.
ChannelModel draw_channel(const SimConfig& cfg, std::int64_t index, double sigma2);

/// Transceiver used by `scheme` on a given channel.
Transceiver design_scheme(Scheme scheme, const ChannelModel& ch, const DesignSpec& spec);

struct CellResult {
  Scheme scheme = Scheme::kOptZfBdfd;
  double snr_db = 0.0;
  FeedbackMode mode = FeedbackMode::kGenie;
  std::int64_t bits = 0;
  std::int64_t errors = 0;
  std::int64_t channels = 0;  // realisations that contributed
  double predicted_mse = 0.0;        // mean over channels of tr(Ree)/M
  double predicted_ber_bound = 0.0;  // mean over channels
  double gmi_bits = 0.0;             // mean over channels

  double ber() const { return bits > 0 ? static_cast<double>(errors) / static_cast<double>(bits) : 0.0; }
  /// Binomial standard error sqrt(p(1-p)/n).
  double std_err() const;
};

struct SkippedCell {
  std::int64_t channel = 0;
  Scheme scheme = Scheme::kOptZfBdfd;
  double snr_db = 0.0;
  std::string reason;
};

struct SimReport {
  SimConfig config;
  std::vector<CellResult> cells;  // scheme-major, then SNR, then feedback mode
  std::vector<SkippedCell> skipped;

  const CellResult* find(Scheme scheme, double snr_db, FeedbackMode mode) const;
};

using SchemeDesigner = std::function<Transceiver(Scheme, const ChannelModel&, const DesignSpec&)>;

/// Runs the Monte Carlo sweep on `workers` threads (0 = hardware concurrency).
/// The report does not depend on the number of workers. `designer` defaults
/// to design_scheme; a design that throws bdfd::Error becomes a skipped cell.
SimReport run_sweep(const SimConfig& cfg, unsigned workers = 1, const SchemeDesigner& designer = {});

}  // namespace bdfd
