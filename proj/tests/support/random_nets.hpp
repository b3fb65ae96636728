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
#include <optional>
#include <string>

#include "ciphernet/crypto/prg.hpp"
#include "ciphernet/netgraph/spec.hpp"
#include "ciphernet/netgraph/tensor.hpp"
#include "ciphernet/planner/planner.hpp"

namespace ciphernet::testkit {

struct RandomNetOptions {
  int max_depth = 4;
  int max_channels = 8;
  int max_height = 8;
  bool allow_skips = true;
  bool allow_head = true;
  int min_depth = 1;
  bool force_skips = false;                 ///< at least one skip when D >= 2
  std::optional<planner::SkipMode> mode;    ///< random when unset
};

/// Small random planner-shaped network: random depth, widths, stage drops,
/// filters in {1, 3, 5}, skip sets and skip mode.
inline netgraph::NetworkSpec random_net(std::uint64_t seed, const RandomNetOptions& o = {}, std::string* label = nullptr) {
  crypto::Prg prg(seed * 0x9E3779B97F4A7C15ull + 17);
  planner::CoreLayout L;
  L.depth = o.min_depth + static_cast<int>(prg.uniform(static_cast<std::uint64_t>(o.max_depth - o.min_depth + 1)));
  const int h0 = o.max_height >= 8 && prg.next_bit() ? 8 : 4;
  L.input = {h0, 1 + static_cast<int>(prg.uniform(3))};
  L.alpha = 2;
  int h = h0;
  for (int i = 0; i < L.depth; ++i) {
    if (i > 0 && h > 2 && prg.uniform(3) == 0) h /= 2;
    L.heights.push_back(h);
    L.channels.push_back(1 + static_cast<int>(prg.uniform(static_cast<std::uint64_t>(o.max_channels))));
    const int fs[] = {1, 3, 5};
    L.filters.push_back(fs[prg.uniform(3)]);
  }
  L.classes = o.allow_head && prg.next_bit() ? 1 + static_cast<int>(prg.uniform(4)) : 0;
  std::vector<std::vector<int>> skips(static_cast<std::size_t>(L.depth));
  bool any = false;
  if (o.allow_skips && (prg.next_bit() || o.force_skips)) {
    for (int i = 1; i < L.depth; ++i)
      for (int k = 0; k < i; ++k)
        if (prg.next_bit()) {
          skips[static_cast<std::size_t>(i)].push_back(k);
          any = true;
        }
    if (!any && o.force_skips && L.depth >= 2) {
      skips[static_cast<std::size_t>(L.depth - 1)].push_back(0);
      any = true;
    }
  }
  const planner::SkipMode modes[] = {planner::SkipMode::Conventional, planner::SkipMode::Shuffle,
                                     planner::SkipMode::Prune};
  const planner::SkipMode drawn = modes[prg.uniform(3)];
  const planner::SkipMode mode = o.mode.value_or(drawn);
  if (label)
    *label = "D=" + std::to_string(L.depth) + " H0=" + std::to_string(h0) + (any ? " skips/" : " noskip/") +
             std::string(planner::to_string(mode));
  return planner::build_network(L, any ? skips : std::vector<std::vector<int>>{}, mode);
}

inline netgraph::TensorF random_input(const netgraph::Shape& s, std::uint64_t seed) {
  crypto::Prg prg(seed ^ 0xA5A5A5A5ull);
  netgraph::TensorF x(s);
  for (float& v : x.values) v = static_cast<float>(prg.uniform_real(-1.0, 1.0));
  return x;
}

}  // namespace ciphernet::testkit
