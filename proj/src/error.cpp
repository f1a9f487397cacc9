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

#include "bdfd/error.hpp"

namespace bdfd {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidInput: return "InvalidInput";
    case ErrorKind::kNotHermitian: return "NotHermitian";
    case ErrorKind::kNotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorKind::kRankDeficient: return "RankDeficient";
    case ErrorKind::kNumericalFailure: return "NumericalFailure";
    case ErrorKind::kRegimeViolation: return "RegimeViolation";
    case ErrorKind::kUnknownScenario: return "UnknownScenario";
    case ErrorKind::kIo: return "IoError";
  }
  return "Unknown";
}

}  // namespace bdfd
