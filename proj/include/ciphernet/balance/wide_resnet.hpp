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

#include <array>
#include <cstdint>

namespace ciphernet::balance {

/// Analytic counts for a CIFAR-style wide residual network: 3x3 stem of
/// `stem` channels, three groups of (depth-4)/6 basic blocks at 32/16/8,
/// pre-activation batch norm, 1x1 projection when widths change, global
/// average pool and a dense classifier.
struct WrnConfig {
  int depth = 16;
  std::array<int, 3> widths{32, 64, 128};
  int stem = 16;
  int classes = 10;
  bool batch_norm = true;
};

struct WrnCounts {
  std::uint64_t relus = 0;
  std::uint64_t params = 0;
};

WrnCounts wrn_counts(const WrnConfig& cfg);

/// Standard WRN-d-k widths (16k, 32k, 64k), which hold MACs per layer
/// roughly constant across groups.
WrnConfig wrn_flop_balanced(int depth, int k);

/// Widths (w, w a^2, w a^4) with a = 2 and the largest w whose ReLU count
/// does not exceed `relu_budget`. Throws BudgetError if w = 1 already does.
WrnConfig wrn_relu_balanced(int depth, std::uint64_t relu_budget);

}  // namespace ciphernet::balance
