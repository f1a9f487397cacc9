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

#include <iosfwd>
#include <string>

#include "bdfd/matrix_core.hpp"
#include "bdfd/sim.hpp"
#include "bdfd/transceiver.hpp"

namespace bdfd {

/// Shortest decimal that parses back to exactly `x`.
std::string format_double(double x);
double parse_double(std::string_view text);

// Matrix text format:
//   cmatrix <rows> <cols>
//   re:im re:im ...   (row-major, one row per line)
void write_matrix(std::ostream& os, const CMatrix& a);
CMatrix read_matrix(std::istream& is);
void save_matrix(const std::string& path, const CMatrix& a);
CMatrix load_matrix(const std::string& path);

// Transceiver file: kind, active modes and predicted MSE, then the F, W and B
// matrices, each introduced by a `matrix <name>` line.
void write_transceiver(std::ostream& os, const Transceiver& t);
Transceiver read_transceiver(std::istream& is);

// Sweep configuration as `key = value` lines; `#` starts a comment and lists
// are comma separated. Keys absent from the file keep their SimConfig
// defaults; unknown keys are rejected.
SimConfig parse_config(std::istream& is);
SimConfig load_config(const std::string& path);
void write_config(std::ostream& os, const SimConfig& cfg, std::string_view line_prefix = "");

/// CSV with the configuration and skipped cells as leading `#` comments.
void write_csv(std::ostream& os, const SimReport& report);

}  // namespace bdfd
