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

#include "bdfd/io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <system_error>

#include "bdfd/error.hpp"

namespace bdfd {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

template <typename Int>
Int parse_int(std::string_view text, const char* what) {
  Int value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw Error(ErrorKind::kInvalidInput, std::string("bad integer for ") + what + ": '" + std::string(text) + "'");
  }
  return value;
}

bool parse_bool(std::string_view text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw Error(ErrorKind::kInvalidInput, "bad boolean '" + std::string(text) + "'");
}

std::string join_doubles(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += format_double(v[i]);
  }
  return out;
}

bool next_content_line(std::istream& is, std::string& line) {
  while (std::getline(is, line)) {
    if (!trim(line).empty()) return true;
  }
  return false;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot open '" + path + "' for reading");
  return in;
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  if (ec != std::errc()) throw Error(ErrorKind::kNumericalFailure, "cannot format number");
  return std::string(buf, ptr);
}

double parse_double(std::string_view text) {
  text = trim(text);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw Error(ErrorKind::kInvalidInput, "bad number '" + std::string(text) + "'");
  }
  return value;
}

void write_matrix(std::ostream& os, const CMatrix& a) {
  os << "cmatrix " << a.rows() << ' ' << a.cols() << '\n';
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      if (j) os << ' ';
      os << format_double(a(i, j).real()) << ':' << format_double(a(i, j).imag());
    }
    os << '\n';
  }
}

CMatrix read_matrix(std::istream& is) {
  std::string tag;
  long long rows = -1;
  long long cols = -1;
  if (!(is >> tag >> rows >> cols) || tag != "cmatrix" || rows < 0 || cols < 0) {
    throw Error(ErrorKind::kInvalidInput, "expected 'cmatrix <rows> <cols>' header");
  }
  CMatrix a(rows, cols);
  std::string token;
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      if (!(is >> token)) throw Error(ErrorKind::kInvalidInput, "matrix has too few entries");
      const auto colon = token.find(':');
      if (colon == std::string::npos) throw Error(ErrorKind::kInvalidInput, "entry '" + token + "' is not re:im");
      const std::string_view sv(token);
      a(i, j) = Complex(parse_double(sv.substr(0, colon)), parse_double(sv.substr(colon + 1)));
    }
  }
  return a;
}

void save_matrix(const std::string& path, const CMatrix& a) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::kIo, "cannot open '" + path + "' for writing");
  write_matrix(out, a);
  if (!out) throw Error(ErrorKind::kIo, "write to '" + path + "' failed");
}

CMatrix load_matrix(const std::string& path) {
  std::ifstream in = open_in(path);
  return read_matrix(in);
}

void write_transceiver(std::ostream& os, const Transceiver& t) {
  os << "transceiver " << to_string(t.kind) << '\n';
  os << "q_active " << t.q_active << '\n';
  const double mse = t.predicted_ree.size() > 0 ? t.predicted_ree.trace().real() / t.predicted_ree.rows() : 0.0;
  os << "predicted_mse " << format_double(mse) << '\n';
  for (const auto& w : t.warnings) os << "# warning: " << w << '\n';
  os << "matrix F\n";
  write_matrix(os, t.f);
  os << "matrix W\n";
  write_matrix(os, t.w);
  os << "matrix B\n";
  write_matrix(os, t.b);
}

Transceiver read_transceiver(std::istream& is) {
  Transceiver t;
  std::string line;
  bool have_f = false;
  bool have_w = false;
  bool have_b = false;
  while (next_content_line(is, line)) {
    const std::string_view l = trim(line);
    if (l.front() == '#') continue;
    std::istringstream fields{std::string(l)};
    std::string key;
    std::string value;
    fields >> key >> value;
    if (key == "transceiver") {
      t.kind = parse_transceiver_kind(value);
    } else if (key == "q_active") {
      t.q_active = parse_int<Eigen::Index>(value, "q_active");
    } else if (key == "predicted_mse") {
      parse_double(value);
    } else if (key == "matrix") {
      CMatrix a = read_matrix(is);
      if (value == "F") {
        t.f = std::move(a);
        have_f = true;
      } else if (value == "W") {
        t.w = std::move(a);
        have_w = true;
      } else if (value == "B") {
        t.b = std::move(a);
        have_b = true;
      } else {
        throw Error(ErrorKind::kInvalidInput, "unknown matrix '" + value + "'");
      }
    } else {
      throw Error(ErrorKind::kInvalidInput, "unexpected line '" + std::string(l) + "'");
    }
  }
  if (!have_f || !have_w || !have_b) throw Error(ErrorKind::kInvalidInput, "transceiver needs F, W and B");
  return t;
}

SimConfig parse_config(std::istream& is) {
  SimConfig cfg;
  bool p_given = false;
  std::map<std::string, bool> seen;
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    std::string_view l(line);
    if (const auto hash = l.find('#'); hash != std::string_view::npos) l = l.substr(0, hash);
    l = trim(l);
    if (l.empty()) continue;
    const auto eq = l.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorKind::kInvalidInput, "line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key(trim(l.substr(0, eq)));
    const std::string_view value = trim(l.substr(eq + 1));
    if (seen[key]) throw Error(ErrorKind::kInvalidInput, "duplicate key '" + key + "'");
    seen[key] = true;

    if (key == "scenario") {
      cfg.scenario = parse_scenario(value);
    } else if (key == "L") {
      cfg.fir_order = parse_int<std::size_t>(value, "L");
    } else if (key == "normalize_taps") {
      cfg.normalize_taps = parse_bool(value);
    } else if (key == "P") {
      cfg.p = parse_int<Eigen::Index>(value, "P");
      p_given = true;
    } else if (key == "K") {
      cfg.k = parse_int<Eigen::Index>(value, "K");
    } else if (key == "M") {
      cfg.m = parse_int<Eigen::Index>(value, "M");
    } else if (key == "b") {
      cfg.b = parse_int<int>(value, "b");
    } else if (key == "schemes") {
      cfg.schemes.clear();
      for (auto item : split(value, ',')) cfg.schemes.push_back(parse_scheme(item));
    } else if (key == "snr_db_grid") {
      cfg.snr_db_grid.clear();
      for (auto item : split(value, ',')) cfg.snr_db_grid.push_back(parse_double(item));
    } else if (key == "p0") {
      cfg.p0 = parse_double(value);
    } else if (key == "channels_per_point") {
      cfg.channels_per_point = parse_int<std::int64_t>(value, key.c_str());
    } else if (key == "blocks_per_channel") {
      cfg.blocks_per_channel = parse_int<std::int64_t>(value, key.c_str());
    } else if (key == "master_seed") {
      cfg.master_seed = parse_int<std::uint64_t>(value, key.c_str());
    } else if (key == "feedback_modes") {
      cfg.feedback_modes.clear();
      for (auto item : split(value, ',')) cfg.feedback_modes.push_back(parse_feedback_mode(item));
    } else {
      throw Error(ErrorKind::kInvalidInput, "unknown config key '" + key + "'");
    }
  }
  if (cfg.scenario == Scenario::kFirZp && !p_given) cfg.p = cfg.k + static_cast<Eigen::Index>(cfg.fir_order);
  // Unit energy per symbol unless stated, as in the presets.
  if (!seen["p0"]) cfg.p0 = static_cast<double>(cfg.m);
  validate(cfg);
  return cfg;
}

SimConfig load_config(const std::string& path) {
  std::ifstream in = open_in(path);
  return parse_config(in);
}

void write_config(std::ostream& os, const SimConfig& cfg, std::string_view prefix) {
  os << prefix << "scenario = " << to_string(cfg.scenario) << '\n';
  if (cfg.scenario == Scenario::kFirZp) {
    os << prefix << "L = " << cfg.fir_order << '\n';
    os << prefix << "normalize_taps = " << (cfg.normalize_taps ? "true" : "false") << '\n';
  }
  os << prefix << "P = " << cfg.p << '\n';
  os << prefix << "K = " << cfg.k << '\n';
  os << prefix << "M = " << cfg.m << '\n';
  os << prefix << "b = " << cfg.b << '\n';
  os << prefix << "schemes = ";
  for (std::size_t i = 0; i < cfg.schemes.size(); ++i) os << (i ? "," : "") << to_string(cfg.schemes[i]);
  os << '\n';
  os << prefix << "snr_db_grid = " << join_doubles(cfg.snr_db_grid) << '\n';
  os << prefix << "p0 = " << format_double(cfg.p0) << '\n';
  os << prefix << "channels_per_point = " << cfg.channels_per_point << '\n';
  os << prefix << "blocks_per_channel = " << cfg.blocks_per_channel << '\n';
  os << prefix << "master_seed = " << cfg.master_seed << '\n';
  os << prefix << "feedback_modes = ";
  for (std::size_t i = 0; i < cfg.feedback_modes.size(); ++i) {
    os << (i ? "," : "") << to_string(cfg.feedback_modes[i]);
  }
  os << '\n';
}

void write_csv(std::ostream& os, const SimReport& report) {
  write_config(os, report.config, "# ");
  for (const auto& s : report.skipped) {
    os << "# skipped channel=" << s.channel << " scheme=" << to_string(s.scheme)
       << " snr_db=" << format_double(s.snr_db) << " reason=" << s.reason << '\n';
  }
  os << "scheme,snr_db,feedback_mode,bits,errors,ber,stderr,predicted_mse,predicted_ber_bound,gmi_bits\n";
  for (const auto& c : report.cells) {
    os << to_string(c.scheme) << ',' << format_double(c.snr_db) << ',' << to_string(c.mode) << ',' << c.bits << ','
       << c.errors << ',' << format_double(c.ber()) << ',' << format_double(c.std_err()) << ','
       << format_double(c.predicted_mse) << ',' << format_double(c.predicted_ber_bound) << ','
       << format_double(c.gmi_bits) << '\n';
  }
}

}  // namespace bdfd
