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
#include <string>
#include <string_view>
#include <vector>

namespace ciphernet::balance {

enum class Rule { ReluBalanced, FlopBalanced, ChannelBalanced };

std::string_view to_string(Rule r);
Rule parse_rule(std::string_view s);

struct LayerAlloc {
  int height = 0;
  int channels = 0;
  int stage = 0;
};

/// Per-layer resolution and width under one scaling rule.
struct ChannelAllocation {
  Rule rule = Rule::ReluBalanced;
  std::vector<LayerAlloc> layers;
  std::uint64_t budget = 0;
  int alpha = 2;
  int filter = 3;
  int base_height = 0;
  /// Multiplier of the stationary point C_i = lambda H0^2 alpha^(2 s_i) / (2 F^2);
  /// set for ReluBalanced only.
  double lagrange_lambda = 0.0;

  std::uint64_t relus_used() const;
  /// ReLUs consumed by one more unit of the first-stage width.
  std::uint64_t channel_quantum() const;
};

/// First layer index of each stage after the first; empty means three
/// equal stages (D divisible by 3).
std::vector<int> default_stage_starts(int depth);
/// Stage index of every layer.
std::vector<int> stage_of_layers(int depth, const std::vector<int>& stage_starts);

/// Maximal integer widths with sum H_i^2 C_i <= budget and the rule's ratio
/// held exactly across stage boundaries:
///   ReluBalanced     C_s = C_1 alpha^(2s)
///   FlopBalanced     C_s = C_1 alpha^s
///   ChannelBalanced  C_s = C_1
/// Slack left by flooring C_1 is not redistributed. Throws BudgetError when
/// C_1 would be 0 and SpecError on an unusable geometry.
ChannelAllocation allocate(Rule rule, int depth, int h0, int alpha, std::uint64_t budget,
                           std::vector<int> stage_starts = {}, int filter = 3);

/// True iff one lambda >= 0 places every C_i within 0.5 of
/// lambda H0^2 alpha^(2 s_i) / (2 F^2) and the unused budget is less than
/// one channel quantum.
bool stationarity_check(const ChannelAllocation& alloc, int filter);

}  // namespace ciphernet::balance
