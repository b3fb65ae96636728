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

#include "ciphernet/balance/wide_resnet.hpp"

#include "ciphernet/error.hpp"

namespace ciphernet::balance {

WrnCounts wrn_counts(const WrnConfig& cfg) {
  if (cfg.depth < 10 || (cfg.depth - 4) % 6 != 0) throw SpecError("WRN depth must be 6n+4 with n >= 1");
  const std::uint64_t blocks = static_cast<std::uint64_t>((cfg.depth - 4) / 6);
  constexpr std::uint64_t res[3] = {32, 16, 8};
  WrnCounts c;
  c.params = 27ull * static_cast<std::uint64_t>(cfg.stem);
  std::uint64_t prev = static_cast<std::uint64_t>(cfg.stem);
  for (int g = 0; g < 3; ++g) {
    const auto out = static_cast<std::uint64_t>(cfg.widths[static_cast<std::size_t>(g)]);
    for (std::uint64_t b = 0; b < blocks; ++b) {
      const std::uint64_t in = prev;
      const std::uint64_t rin = (b == 0 && g > 0) ? res[g - 1] : res[g];
      // Two pre-activation ReLUs per block: on the block input and between convs.
      c.relus += in * rin * rin + out * res[g] * res[g];
      c.params += 9 * in * out + 9 * out * out;
      if (in != out) c.params += in * out;
      if (cfg.batch_norm) c.params += 2 * in + 2 * out;
      prev = out;
    }
  }
  c.relus += prev * 64;  // final BN-ReLU at 8x8
  if (cfg.batch_norm) c.params += 2 * prev;
  const auto classes = static_cast<std::uint64_t>(cfg.classes);
  c.params += prev * classes + classes;
  return c;
}

WrnConfig wrn_flop_balanced(int depth, int k) {
  if (k < 1) throw SpecError("widen factor must be positive");
  WrnConfig cfg;
  cfg.depth = depth;
  cfg.widths = {16 * k, 32 * k, 64 * k};
  return cfg;
}

WrnConfig wrn_relu_balanced(int depth, std::uint64_t relu_budget) {
  WrnConfig cfg;
  cfg.depth = depth;
  auto at = [&](int w) {
    cfg.widths = {w, 4 * w, 16 * w};
    return wrn_counts(cfg).relus;
  };
  if (at(1) > relu_budget) throw BudgetError("ReLU budget below the narrowest WRN");
  int w = 1;
  while (at(w + 1) <= relu_budget) ++w;
  cfg.widths = {w, 4 * w, 16 * w};
  return cfg;
}

}  // namespace ciphernet::balance
