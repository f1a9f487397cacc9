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

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "bdfd/analysis.hpp"
#include "bdfd/error.hpp"
#include "bdfd/io.hpp"
#include "bdfd/sim.hpp"
#include "bdfd/transceiver.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitIo = 3;

bdfd::ChannelModel load_channel(const std::string& channel_path, const std::string& rvv) {
  bdfd::CMatrix h = bdfd::load_matrix(channel_path);
  std::optional<double> sigma2;
  try {
    sigma2 = bdfd::parse_double(rvv);
  } catch (const bdfd::Error&) {
  }
  bdfd::ChannelModel ch =
      sigma2 ? bdfd::with_white_noise(std::move(h), *sigma2) : bdfd::ChannelModel{std::move(h), bdfd::load_matrix(rvv)};
  bdfd::validate(ch);
  return ch;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw bdfd::Error(bdfd::ErrorKind::kIo, "cannot open '" + path + "' for writing");
  return out;
}

int exit_code_for(bdfd::ErrorKind kind) {
  switch (kind) {
    case bdfd::ErrorKind::kIo: return kExitIo;
    case bdfd::ErrorKind::kInvalidInput:
    case bdfd::ErrorKind::kUnknownScenario: return kExitUsage;
    default: return kExitNumerical;
  }
}

void print_row(const std::string& name, const std::string& value) {
  std::printf("  %-34s %s\n", name.c_str(), value.c_str());
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", x);
  return buf;
}

void run_analyze(const bdfd::ChannelModel& ch, const bdfd::DesignSpec& spec, int b) {
  using namespace bdfd;
  const EigenSystem eig = hermitian_eig(whitened_gram(ch).gram);
  const std::vector<double> lambdas = significant_eigenvalues(eig.values);
  const BerCoeffs coeffs = BerCoeffs::for_qam(b);

  std::printf("channel %lldx%lld, M=%lld, p0=%s, %d-QAM\n", static_cast<long long>(ch.rx_dim()),
              static_cast<long long>(ch.tx_dim()), static_cast<long long>(spec.m), fmt(spec.p0).c_str(), 1 << (2 * b));
  std::string eigs;
  for (double l : lambdas) eigs += (eigs.empty() ? "" : " ") + fmt(l);
  print_row("eigenvalues", eigs);

  std::printf("closed-form MSE\n");
  for (auto d : {OptimalDesign::kZfBdfd, OptimalDesign::kMmseBdfd, OptimalDesign::kZfLinear,
                 OptimalDesign::kMmseLinear}) {
    try {
      print_row(std::string(to_string(d)), fmt(closed_form_mse(d, lambdas, spec)));
    } catch (const Error& e) {
      print_row(std::string(to_string(d)), std::string("n/a (") + e.what() + ")");
    }
  }

  std::printf("designed transceivers\n");
  std::printf("  %-20s %12s %12s %12s %12s %12s\n", "design", "mse", "geo_mse", "min_sinr", "gmi_bits", "ber_bound");
  struct Row {
    const char* name;
    Scheme scheme;
  };
  for (const Row& row : {Row{"OPT_ZF_BDFD", Scheme::kOptZfBdfd}, Row{"OPT_MMSE_BDFD", Scheme::kOptMmseBdfd},
                         Row{"OPT_LINEAR_ZF", Scheme::kOptLinearZf}, Row{"OPT_LINEAR_MMSE", Scheme::kOptLinearMmse}}) {
    try {
      const Transceiver t = design_scheme(row.scheme, ch, spec);
      const ReceiverFamily family = family_of(t.kind);
      const MseReport rep = mse_report(error_covariance(ch, t), family);
      double min_sinr = rep.per_element_sinr.front();
      for (double s : rep.per_element_sinr) min_sinr = std::min(min_sinr, s);
      const BerBound bound = ber_lower_bound(rep.ree.trace().real(), spec.m, coeffs, family);
      std::printf("  %-20s %12s %12s %12s %12s %12s%s\n", row.name, fmt(rep.arithmetic_mse).c_str(),
                  fmt(rep.geometric_mse).c_str(), fmt(min_sinr).c_str(), fmt(gmi(ch, t.f)).c_str(),
                  fmt(bound.value).c_str(), bound.in_convex_regime ? "" : " (outside convex regime)");
      for (const auto& w : t.warnings) std::printf("    warning: %s\n", w.c_str());
    } catch (const Error& e) {
      std::printf("  %-20s n/a (%s)\n", row.name, e.what());
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Block precoding and intra-block decision feedback detection toolkit"};
  app.require_subcommand(1);

  std::string channel_path;
  std::string rvv_arg = "1";
  long long m = 0;
  double p0 = 1.0;
  std::string kind_name;
  std::string out_path;
  int b = 1;

  auto* design = app.add_subcommand("design", "Design F, W and B for a channel");
  design->add_option("--channel", channel_path, "Channel matrix file")->required();
  design->add_option("--rvv", rvv_arg, "Noise covariance file or white-noise variance")->required();
  design->add_option("--M", m, "Symbols per block")->required()->check(CLI::PositiveNumber);
  design->add_option("--p0", p0, "Transmit power per block")->required()->check(CLI::PositiveNumber);
  design->add_option("--kind", kind_name, "ZF_BDFD, MMSE_BDFD, LINEAR_ZF or LINEAR_MMSE")->required();
  design->add_option("--out", out_path, "Output transceiver file")->required();

  std::string config_path;
  std::string preset;
  std::optional<long long> channels;
  std::optional<long long> blocks;
  std::optional<unsigned long long> seed;
  unsigned workers = 1;
  auto* simulate = app.add_subcommand("simulate", "Run a Monte Carlo BER sweep");
  auto* cfg_opt = simulate->add_option("--config", config_path, "Sweep configuration file");
  auto* preset_opt = simulate->add_option("--preset", preset, "fir16, mimo33 or mimo34");
  cfg_opt->excludes(preset_opt);
  simulate->add_option("--channels", channels, "Channel realisations per point")->check(CLI::PositiveNumber);
  simulate->add_option("--blocks", blocks, "Blocks per channel realisation")->check(CLI::PositiveNumber);
  simulate->add_option("--seed", seed, "Master seed");
  simulate->add_option("--workers", workers, "Worker threads (0 = all cores)");
  simulate->add_option("--out", out_path, "Output CSV file")->required();

  auto* analyze = app.add_subcommand("analyze", "Print closed-form and designed MSE, SINR, GMI and BER bounds");
  analyze->add_option("--channel", channel_path, "Channel matrix file")->required();
  analyze->add_option("--rvv", rvv_arg, "Noise covariance file or white-noise variance (default 1)");
  analyze->add_option("--M", m, "Symbols per block (default K)")->check(CLI::NonNegativeNumber);
  analyze->add_option("--p0", p0, "Transmit power per block")->check(CLI::PositiveNumber);
  analyze->add_option("--b", b, "QAM order 4^b")->check(CLI::Range(1, 8));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*design) {
      const bdfd::ChannelModel ch = load_channel(channel_path, rvv_arg);
      const bdfd::TransceiverKind kind = bdfd::parse_transceiver_kind(kind_name);
      const bdfd::DesignSpec spec{static_cast<Eigen::Index>(m), p0};
      bdfd::Transceiver t;
      switch (kind) {
        case bdfd::TransceiverKind::kZfBdfd: t = bdfd::design_zf_bdfd(ch, spec); break;
        case bdfd::TransceiverKind::kMmseBdfd: t = bdfd::design_mmse_bdfd(ch, spec); break;
        case bdfd::TransceiverKind::kLinearZf: t = bdfd::design_scheme(bdfd::Scheme::kOptLinearZf, ch, spec); break;
        case bdfd::TransceiverKind::kLinearMmse:
          t = bdfd::design_scheme(bdfd::Scheme::kOptLinearMmse, ch, spec);
          break;
      }
      for (const auto& w : t.warnings) std::cerr << "warning: " << w << '\n';
      std::ofstream out = open_out(out_path);
      bdfd::write_transceiver(out, t);
      if (!out) throw bdfd::Error(bdfd::ErrorKind::kIo, "write to '" + out_path + "' failed");
    } else if (*simulate) {
      if (config_path.empty() == preset.empty()) {
        std::cerr << "simulate needs exactly one of --config or --preset\n";
        return kExitUsage;
      }
      bdfd::SimConfig cfg = config_path.empty() ? bdfd::scenario_preset(preset) : bdfd::load_config(config_path);
      if (channels) cfg.channels_per_point = *channels;
      if (blocks) cfg.blocks_per_channel = *blocks;
      if (seed) cfg.master_seed = *seed;
      const bdfd::SimReport report = bdfd::run_sweep(cfg, workers);
      std::ofstream out = open_out(out_path);
      bdfd::write_csv(out, report);
      if (!out) throw bdfd::Error(bdfd::ErrorKind::kIo, "write to '" + out_path + "' failed");
      if (!report.skipped.empty()) std::cerr << report.skipped.size() << " cells skipped (see CSV header)\n";
    } else if (*analyze) {
      const bdfd::ChannelModel ch = load_channel(channel_path, rvv_arg);
      const Eigen::Index block = m > 0 ? static_cast<Eigen::Index>(m) : ch.tx_dim();
      run_analyze(ch, bdfd::DesignSpec{block, p0}, b);
    }
  } catch (const bdfd::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitOk;
}
