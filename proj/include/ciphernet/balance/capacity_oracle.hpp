// Copyright 2026 The ciphernet Authors
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
#include <vector>

namespace ciphernet::balance {

struct LandscapePoint {
  std::vector<int> channels;
  double objective = 0.0;
  std::uint64_t relus = 0;
};

struct CapacityResult {
  std::vector<int> best;            ///< lexicographically smallest argmax
  double best_objective = 0.0;
  std::uint64_t best_relus = 0;
  std::uint64_t feasible_points = 0;
  std::vector<LandscapePoint> landscape;  ///< feasible points, enumeration order; filled on request
};

/// Exhaustive maximum of sum F^2 C_i^2 over C in [1, C_max]^D subject to
/// sum H_i^2 C_i <= budget. Deterministic under any thread count.
/// Throws BudgetError if (C_max+1)^D exceeds 1e7 or nothing is feasible.
CapacityResult capacity_oracle(const std::vector<int>& resolutions, int filter, std::uint64_t budget, int c_max,
                               bool keep_landscape = false);

/// Resolutions from (D, H0, alpha) with three equal stages when D is
/// divisible by 3 and a single stage otherwise.
CapacityResult capacity_oracle(int depth, int h0, int alpha, int filter, std::uint64_t budget, int c_max,
                               bool keep_landscape = false);

}  // namespace ciphernet::balance
