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

#include "ciphernet/balance/allocation.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

#include "ciphernet/error.hpp"

namespace ciphernet::balance {

std::string_view to_string(Rule r) {
  switch (r) {
    case Rule::ReluBalanced: return "relu";
    case Rule::FlopBalanced: return "flop";
    case Rule::ChannelBalanced: return "channel";
  }
  return "?";
}

Rule parse_rule(std::string_view s) {
  std::string t;
  for (char c : s) t.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (t == "relu" || t == "relu_balanced" || t == "relu-balanced") return Rule::ReluBalanced;
  if (t == "flop" || t == "flop_balanced" || t == "flop-balanced") return Rule::FlopBalanced;
  if (t == "channel" || t == "channel_balanced" || t == "channel-balanced") return Rule::ChannelBalanced;
  throw SpecError("unknown scaling rule '" + std::string(s) + "' (relu|flop|channel)");
}

namespace {

std::uint64_t ipow(std::uint64_t b, int e) {
  std::uint64_t r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

/// Width multiplier of stage s relative to stage 0.
std::uint64_t stage_ratio(Rule rule, int alpha, int s) {
  switch (rule) {
    case Rule::ReluBalanced: return ipow(static_cast<std::uint64_t>(alpha), 2 * s);
    case Rule::FlopBalanced: return ipow(static_cast<std::uint64_t>(alpha), s);
    case Rule::ChannelBalanced: return 1;
  }
  return 1;
}

}  // namespace

std::vector<int> default_stage_starts(int depth) {
  if (depth % 3 != 0) throw SpecError("depth " + std::to_string(depth) + " is not divisible by 3; pass stage boundaries");
  if (depth == 0) return {};
  return {depth / 3, 2 * depth / 3};
}

std::vector<int> stage_of_layers(int depth, const std::vector<int>& stage_starts) {
  for (std::size_t k = 0; k < stage_starts.size(); ++k) {
    if (stage_starts[k] <= 0 || stage_starts[k] >= depth)
      throw SpecError("stage boundary " + std::to_string(stage_starts[k]) + " outside (0, depth)");
    if (k > 0 && stage_starts[k] <= stage_starts[k - 1]) throw SpecError("stage boundaries must increase");
  }
  std::vector<int> stage(static_cast<std::size_t>(depth), 0);
  for (int i = 0; i < depth; ++i)
    for (int b : stage_starts)
      if (i >= b) ++stage[static_cast<std::size_t>(i)];
  return stage;
}

std::uint64_t ChannelAllocation::relus_used() const {
  std::uint64_t s = 0;
  for (const auto& l : layers)
    s += static_cast<std::uint64_t>(l.height) * static_cast<std::uint64_t>(l.height) * static_cast<std::uint64_t>(l.channels);
  return s;
}

std::uint64_t ChannelAllocation::channel_quantum() const {
  std::uint64_t q = 0;
  for (const auto& l : layers)
    q += static_cast<std::uint64_t>(l.height) * static_cast<std::uint64_t>(l.height) * stage_ratio(rule, alpha, l.stage);
  return q;
}

ChannelAllocation allocate(Rule rule, int depth, int h0, int alpha, std::uint64_t budget, std::vector<int> stage_starts,
                           int filter) {
  if (depth < 1) throw SpecError("depth must be positive");
  if (alpha < 1 || h0 < 1) throw SpecError("alpha and resolution must be positive");
  if (stage_starts.empty() && depth >= 3) stage_starts = default_stage_starts(depth);
  const std::vector<int> stage = stage_of_layers(depth, stage_starts);

  ChannelAllocation a;
  a.rule = rule;
  a.budget = budget;
  a.alpha = alpha;
  a.filter = filter;
  a.base_height = h0;
  int h = h0;
  for (int i = 0; i < depth; ++i) {
    if (i > 0 && stage[i] != stage[i - 1]) {
      if (h % alpha != 0)
        throw SpecError("resolution " + std::to_string(h) + " is not divisible by alpha " + std::to_string(alpha));
      h /= alpha;
    }
    a.layers.push_back({h, 0, stage[i]});
  }
  const std::uint64_t quantum = a.channel_quantum();
  const std::uint64_t c1 = budget / quantum;
  if (c1 < 1)
    throw BudgetError("budget " + std::to_string(budget) + " is below one channel per layer (" + std::to_string(quantum) +
                      " ReLUs)");
  for (auto& l : a.layers) {
    const std::uint64_t c = c1 * stage_ratio(rule, alpha, l.stage);
    if (c > static_cast<std::uint64_t>(std::numeric_limits<int>::max())) throw BudgetError("channel count overflows");
    l.channels = static_cast<int>(c);
  }
  if (rule == Rule::ReluBalanced)
    a.lagrange_lambda = 2.0 * filter * filter * static_cast<double>(c1) / (static_cast<double>(h0) * h0);
  return a;
}

bool stationarity_check(const ChannelAllocation& alloc, int filter) {
  if (alloc.layers.empty()) return true;
  const double h0 = alloc.base_height > 0 ? alloc.base_height : alloc.layers.front().height;
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();
  for (const auto& l : alloc.layers) {
    // C_i = lambda * k_i with k_i = H0^2 alpha^(2 s) / (2 F^2)
    const double k = h0 * h0 * std::pow(static_cast<double>(alloc.alpha), 2.0 * l.stage) / (2.0 * filter * filter);
    lo = std::max(lo, (l.channels - 0.5) / k);
    hi = std::min(hi, (l.channels + 0.5) / k);
  }
  if (lo > hi) return false;
  const std::uint64_t used = alloc.relus_used();
  if (used > alloc.budget) return false;
  // Tight within one quantum of the rule the allocation claims to follow.
  ChannelAllocation relu = alloc;
  relu.rule = Rule::ReluBalanced;
  return alloc.budget - used < relu.channel_quantum();
}

}  // namespace ciphernet::balance
