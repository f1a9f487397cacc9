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

#include <cstddef>
#include <span>
#include <vector>

#include "bdfd/matrix_core.hpp"

namespace bdfd {

/// Diagonal of a non-singular diagonal matrix, held in non-increasing order.
///
/// `order[i]` is the caller index of sorted entry i, so a rotation computed for
/// the sorted diagonal can be mapped back with `unpermute_rows`.
class GammaSpec {
 public:
  /// Accepts an already non-increasing, strictly positive sequence.
  static GammaSpec from_sorted(std::span<const double> gammas);
  /// Sorts (stable, descending) and remembers the permutation.
  static GammaSpec sorted(std::span<const double> gammas);

  const std::vector<double>& values() const { return values_; }
  const std::vector<std::size_t>& order() const { return order_; }
  std::size_t size() const { return values_.size(); }

  /// Given S for the sorted diagonal, returns S' for the caller's ordering,
  /// i.e. Gamma_caller * S' has the same R-factor as Gamma_sorted * S.
  CMatrix unpermute_rows(const CMatrix& s) const;

 private:
  GammaSpec(std::vector<double> values, std::vector<std::size_t> order)
      : values_(std::move(values)), order_(std::move(order)) {}

  std::vector<double> values_;
  std::vector<std::size_t> order_;
};

struct EqualDiagRotation {
  CMatrix s;      // M x M unitary
  double r_diag;  // common R-factor diagonal, (prod gamma_k)^{1/M}
};

/// Unitary S such that diag(gamma) * S = Q R with every R_ii equal.
///
/// Columns are built one at a time. Column k+1 lives in the orthogonal
/// complement of the first k columns and mixes the extreme eigenvectors of the
/// projected Gram matrix so that its new R-factor pivot is exactly
/// g = (prod gamma_k^2)^{1/M}. All-equal inputs short-circuit to S = I.
EqualDiagRotation equal_diag_rotation(const GammaSpec& spec);

}  // namespace bdfd
