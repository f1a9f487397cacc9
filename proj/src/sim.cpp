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

#include "bdfd/sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <string>
#include <thread>

#include "bdfd/analysis.hpp"
#include "bdfd/error.hpp"
#include "bdfd/random.hpp"

namespace bdfd {

namespace {

struct SchemeName {
  Scheme scheme;
  std::string_view name;
};

constexpr SchemeName kSchemeNames[] = {
    {Scheme::kOptZfBdfd, "OPT_ZF_BDFD"},
    {Scheme::kOptMmseBdfd, "OPT_MMSE_BDFD"},
    {Scheme::kIdentityZfBdfd, "IDENTITY_ZF_BDFD"},
    {Scheme::kIdentityMmseBdfd, "IDENTITY_MMSE_BDFD"},
    {Scheme::kDftZfBdfd, "DFT_ZF_BDFD"},
    {Scheme::kDftMmseBdfd, "DFT_MMSE_BDFD"},
    {Scheme::kOptLinearZf, "OPT_LINEAR_ZF"},
    {Scheme::kOptLinearMmse, "OPT_LINEAR_MMSE"},
};

const std::vector<Scheme>& all_schemes() {
  static const std::vector<Scheme> schemes = [] {
    std::vector<Scheme> v;
    for (const auto& s : kSchemeNames) v.push_back(s.scheme);
    return v;
  }();
  return schemes;
}

std::vector<double> grid(double lo, double hi, double step) {
  std::vector<double> out;
  for (int i = 0; lo + i * step <= hi + 1e-9; ++i) out.push_back(lo + i * step);
  return out;
}

// Accumulators for one channel realisation; reduced in channel order.
struct PartialCell {
  std::int64_t bits = 0;
  std::int64_t errors = 0;
  bool designed = false;
  double mse = 0.0;
  double bound = 0.0;
  double gmi = 0.0;
};

struct ChannelOutcome {
  std::vector<PartialCell> cells;  // same layout as SimReport::cells
  std::vector<SkippedCell> skipped;
};

std::size_t cell_index(const SimConfig& cfg, std::size_t scheme, std::size_t snr, std::size_t mode) {
  return (scheme * cfg.snr_db_grid.size() + snr) * cfg.feedback_modes.size() + mode;
}

ChannelOutcome simulate_channel(const SimConfig& cfg, std::int64_t index, const Constellation& constellation,
                                const BerCoeffs& coeffs, const SchemeDesigner& designer) {
  const std::size_t n_cells = cfg.schemes.size() * cfg.snr_db_grid.size() * cfg.feedback_modes.size();
  ChannelOutcome out;
  out.cells.resize(n_cells);

  const ChannelModel base = draw_channel(cfg, index, 1.0);
  const Eigen::Index m = cfg.m;
  const Eigen::Index p = base.rx_dim();
  const int bits_per_symbol = constellation.bits_per_symbol();
  const auto uindex = static_cast<std::uint64_t>(index);

  // The same bits and unit-variance noise are reused by every scheme and SNR.
  RandomStream data_rng(cfg.master_seed, uindex, StreamPurpose::kData);
  RandomStream noise_rng(cfg.master_seed, uindex, StreamPurpose::kNoise);
  const auto blocks = static_cast<std::size_t>(cfg.blocks_per_channel);
  const auto bits_per_block = static_cast<std::size_t>(m * bits_per_symbol);
  std::vector<Bit> bits(blocks * bits_per_block);
  for (auto& bit : bits) bit = static_cast<Bit>(data_rng.bit());
  std::vector<std::vector<Complex>> symbols(blocks);
  for (std::size_t blk = 0; blk < blocks; ++blk) {
    symbols[blk] = qam_map(std::span<const Bit>(bits).subspan(blk * bits_per_block, bits_per_block), constellation);
  }
  const CMatrix unit_noise = complex_gaussian_matrix(p, static_cast<Eigen::Index>(blocks), noise_rng);

  CMatrix s(m, static_cast<Eigen::Index>(blocks));
  for (std::size_t blk = 0; blk < blocks; ++blk) {
    for (Eigen::Index i = 0; i < m; ++i) s(i, static_cast<Eigen::Index>(blk)) = symbols[blk][static_cast<std::size_t>(i)];
  }

  const DesignSpec spec{m, cfg.p0};
  for (std::size_t si = 0; si < cfg.schemes.size(); ++si) {
    const Scheme scheme = cfg.schemes[si];
    const ReceiverFamily family = family_of(receiver_kind(scheme));
    DetectOptions options;
    options.unbiased_scaling = family == ReceiverFamily::kMmse;

    for (std::size_t ni = 0; ni < cfg.snr_db_grid.size(); ++ni) {
      const double snr_db = cfg.snr_db_grid[ni];
      const double sigma2 = noise_variance(cfg, snr_db);
      const ChannelModel ch = with_white_noise(base.h, sigma2);
      Transceiver t;
      double mse = 0.0;
      double bound = 0.0;
      double info = 0.0;
      try {
        t = designer ? designer(scheme, ch, spec) : design_scheme(scheme, ch, spec);
        const CMatrix ree = error_covariance(ch, t);
        mse = ree.trace().real() / static_cast<double>(m);
        bound = ber_lower_bound(ree.trace().real(), m, coeffs, family).value;
        info = gmi(ch, t.f);
      } catch (const Error& e) {
        out.skipped.push_back(SkippedCell{index, scheme, snr_db, e.what()});
        continue;
      }

      const CMatrix y = ch.h * (t.f * s) + std::sqrt(sigma2) * unit_noise;
      for (std::size_t mi = 0; mi < cfg.feedback_modes.size(); ++mi) {
        PartialCell& cell = out.cells[cell_index(cfg, si, ni, mi)];
        cell.designed = true;
        cell.mse = mse;
        cell.bound = bound;
        cell.gmi = info;
        for (std::size_t blk = 0; blk < blocks; ++blk) {
          const DetectionResult r = bdfd_detect(y.col(static_cast<Eigen::Index>(blk)), t, constellation,
                                                cfg.feedback_modes[mi], std::span<const Complex>(symbols[blk]), options);
          const BitErrorCount count = count_bit_errors(
              r.decided_bits, std::span<const Bit>(bits).subspan(blk * bits_per_block, bits_per_block));
          cell.bits += count.total;
          cell.errors += count.errors;
        }
      }
    }
  }
  return out;
}

}  // namespace

std::string_view to_string(Scenario s) { return s == Scenario::kFirZp ? "FIR_ZP" : "MIMO"; }

Scenario parse_scenario(std::string_view name) {
  if (name == "FIR_ZP") return Scenario::kFirZp;
  if (name == "MIMO") return Scenario::kMimo;
  throw Error(ErrorKind::kUnknownScenario, "unknown scenario '" + std::string(name) + "'");
}

std::string_view to_string(Scheme s) {
  for (const auto& entry : kSchemeNames) {
    if (entry.scheme == s) return entry.name;
  }
  return "?";
}

Scheme parse_scheme(std::string_view name) {
  for (const auto& entry : kSchemeNames) {
    if (entry.name == name) return entry.scheme;
  }
  throw Error(ErrorKind::kInvalidInput, "unknown scheme '" + std::string(name) + "'");
}

TransceiverKind receiver_kind(Scheme s) {
  switch (s) {
    case Scheme::kOptZfBdfd:
    case Scheme::kIdentityZfBdfd:
    case Scheme::kDftZfBdfd: return TransceiverKind::kZfBdfd;
    case Scheme::kOptMmseBdfd:
    case Scheme::kIdentityMmseBdfd:
    case Scheme::kDftMmseBdfd: return TransceiverKind::kMmseBdfd;
    case Scheme::kOptLinearZf: return TransceiverKind::kLinearZf;
    case Scheme::kOptLinearMmse: return TransceiverKind::kLinearMmse;
  }
  return TransceiverKind::kZfBdfd;
}

void validate(const SimConfig& cfg) {
  auto fail = [](const std::string& msg) { throw Error(ErrorKind::kInvalidInput, msg); };
  if (cfg.k < 1 || cfg.m < 1 || cfg.p < 1) fail("dimensions must be positive");
  if (cfg.scenario == Scenario::kFirZp && cfg.p != cfg.k + static_cast<Eigen::Index>(cfg.fir_order)) {
    fail("FIR_ZP needs P = K + L");
  }
  if (cfg.m > std::min(cfg.p, cfg.k)) fail("M must not exceed min(P, K)");
  if (cfg.b < 1 || cfg.b > 8) fail("b must be in 1..8");
  if (cfg.schemes.empty()) fail("schemes must not be empty");
  if (cfg.snr_db_grid.empty()) fail("snr_db_grid must not be empty");
  for (double snr : cfg.snr_db_grid) {
    if (!std::isfinite(snr)) fail("SNR values must be finite");
  }
  if (!(cfg.p0 > 0.0) || !std::isfinite(cfg.p0)) fail("p0 must be positive");
  if (cfg.channels_per_point < 1) fail("channels_per_point must be >= 1");
  if (cfg.blocks_per_channel < 1) fail("blocks_per_channel must be >= 1");
  if (cfg.feedback_modes.empty()) fail("feedback_modes must not be empty");
  for (Scheme s : cfg.schemes) {
    const bool fixed = s == Scheme::kIdentityZfBdfd || s == Scheme::kIdentityMmseBdfd || s == Scheme::kDftZfBdfd ||
                       s == Scheme::kDftMmseBdfd;
    if (fixed && cfg.k != cfg.m) fail(std::string(to_string(s)) + " needs K == M");
  }
}

SimConfig scenario_preset(std::string_view name) {
  SimConfig cfg;
  cfg.schemes = all_schemes();
  cfg.b = 1;
  cfg.channels_per_point = 500;
  cfg.blocks_per_channel = 20;
  if (name == "fir16") {
    cfg.scenario = Scenario::kFirZp;
    cfg.fir_order = 4;
    cfg.normalize_taps = true;
    cfg.k = 16;
    cfg.m = 16;
    cfg.p = 20;
    cfg.snr_db_grid = grid(0.0, 20.0, 2.0);
  } else if (name == "mimo33" || name == "mimo34") {
    cfg.scenario = Scenario::kMimo;
    cfg.p = name == "mimo33" ? 3 : 4;
    cfg.k = 3;
    cfg.m = 3;
    cfg.snr_db_grid = grid(0.0, 30.0, 2.0);
  } else {
    throw Error(ErrorKind::kUnknownScenario, "unknown preset '" + std::string(name) + "'");
  }
  cfg.p0 = static_cast<double>(cfg.m);
  return cfg;
}

double noise_variance(const SimConfig& cfg, double snr_db) {
  return (cfg.p0 / static_cast<double>(cfg.m)) / std::pow(10.0, snr_db / 10.0);
}

ChannelModel draw_channel(const SimConfig& cfg, std::int64_t index, double sigma2) {
  RandomStream rng(cfg.master_seed, static_cast<std::uint64_t>(index), StreamPurpose::kChannel);
  if (cfg.scenario == Scenario::kFirZp) {
    const FirTaps taps = random_fir_taps(cfg.fir_order, rng, cfg.normalize_taps);
    return with_white_noise(fir_zero_padded_channel(taps, cfg.k), sigma2);
  }
  return with_white_noise(rayleigh_mimo_channel(cfg.p, cfg.k, rng), sigma2);
}

Transceiver design_scheme(Scheme scheme, const ChannelModel& ch, const DesignSpec& spec) {
  switch (scheme) {
    case Scheme::kOptZfBdfd: return design_zf_bdfd(ch, spec);
    case Scheme::kOptMmseBdfd: return design_mmse_bdfd(ch, spec);
    case Scheme::kIdentityZfBdfd:
    case Scheme::kIdentityMmseBdfd:
      return receiver_for_precoder(ch, baseline_precoder(BaselineKind::kIdentity, ch, spec), receiver_kind(scheme));
    case Scheme::kDftZfBdfd:
    case Scheme::kDftMmseBdfd:
      return receiver_for_precoder(ch, baseline_precoder(BaselineKind::kDft, ch, spec), receiver_kind(scheme));
    case Scheme::kOptLinearZf:
      return receiver_for_precoder(ch, baseline_precoder(BaselineKind::kOptLinearZf, ch, spec),
                                   TransceiverKind::kLinearZf);
    case Scheme::kOptLinearMmse:
      return receiver_for_precoder(ch, baseline_precoder(BaselineKind::kOptLinearMmse, ch, spec),
                                   TransceiverKind::kLinearMmse);
  }
  throw Error(ErrorKind::kInvalidInput, "unknown scheme");
}

double CellResult::std_err() const {
  if (bits <= 0) return 0.0;
  const double p = ber();
  return std::sqrt(p * (1.0 - p) / static_cast<double>(bits));
}

const CellResult* SimReport::find(Scheme scheme, double snr_db, FeedbackMode mode) const {
  for (const auto& c : cells) {
    if (c.scheme == scheme && c.mode == mode && std::abs(c.snr_db - snr_db) < 1e-9) return &c;
  }
  return nullptr;
}

SimReport run_sweep(const SimConfig& cfg, unsigned workers, const SchemeDesigner& designer) {
  validate(cfg);
  const Constellation constellation(cfg.b);
  const BerCoeffs coeffs = BerCoeffs::for_qam(cfg.b);
  const auto n_channels = static_cast<std::size_t>(cfg.channels_per_point);

  std::vector<ChannelOutcome> outcomes(n_channels);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n_channels || failed.load()) return;
      try {
        outcomes[i] = simulate_channel(cfg, static_cast<std::int64_t>(i), constellation, coeffs, designer);
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
        return;
      }
    }
  };

  if (workers == 0) workers = std::max(1U, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, n_channels));
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  SimReport report;
  report.config = cfg;
  for (std::size_t si = 0; si < cfg.schemes.size(); ++si) {
    for (std::size_t ni = 0; ni < cfg.snr_db_grid.size(); ++ni) {
      for (std::size_t mi = 0; mi < cfg.feedback_modes.size(); ++mi) {
        CellResult cell;
        cell.scheme = cfg.schemes[si];
        cell.snr_db = cfg.snr_db_grid[ni];
        cell.mode = cfg.feedback_modes[mi];
        const std::size_t idx = cell_index(cfg, si, ni, mi);
        for (const auto& o : outcomes) {
          const PartialCell& pc = o.cells[idx];
          if (!pc.designed) continue;
          cell.bits += pc.bits;
          cell.errors += pc.errors;
          cell.channels += 1;
          cell.predicted_mse += pc.mse;
          cell.predicted_ber_bound += pc.bound;
          cell.gmi_bits += pc.gmi;
        }
        if (cell.channels > 0) {
          const auto n = static_cast<double>(cell.channels);
          cell.predicted_mse /= n;
          cell.predicted_ber_bound /= n;
          cell.gmi_bits /= n;
        }
        report.cells.push_back(cell);
      }
    }
  }
  for (const auto& o : outcomes) {
    report.skipped.insert(report.skipped.end(), o.skipped.begin(), o.skipped.end());
  }
  return report;
}

}  // namespace bdfd
