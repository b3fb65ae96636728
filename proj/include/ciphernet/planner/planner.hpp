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
#include <functional>
#include <string_view>
#include <vector>

#include "ciphernet/netgraph/spec.hpp"
#include "ciphernet/planner/skip_plan.hpp"

namespace ciphernet::planner {

/// How skip connections enter a core layer j with sources S_j.
///   Conventional  relu(concat[conv_j, conv_k...]) -> 1x1 -> relu
///   Shuffle       concat[relu(conv_j), relu(conv_k)...] -> 1x1 -> relu
///   Prune         concat[relu(conv_j), relu(conv_k)...] -> 1x1
enum class SkipMode { Conventional, Shuffle, Prune };

std::string_view to_string(SkipMode m);
SkipMode parse_skip_mode(std::string_view s);

/// Node ids of planner-built networks. Core layer i uses base 100 (i + 1).
namespace ids {
inline constexpr int kMaxDepth = 80;
inline int base(int layer) { return 100 * (layer + 1); }
inline int stage_pool(int layer) { return base(layer); }
inline int conv(int layer) { return base(layer) + 1; }
inline int skip_pool(int layer, int source) { return base(layer) + 10 + source; }
inline int relu(int layer) { return base(layer) + 95; }
inline int reshape(int layer) { return base(layer) + 96; }
inline int post_relu(int layer) { return base(layer) + 97; }
inline int head_pool(int depth) { return base(depth); }
inline int head_dense(int depth) { return base(depth) + 1; }
}  // namespace ids

/// Geometry shared by a core and every network derived from it.
struct CoreLayout {
  int depth = 0;
  netgraph::Shape input{32, 3};
  int alpha = 2;
  std::vector<int> heights;
  std::vector<int> channels;
  std::vector<int> filters;
  int classes = 10;  ///< 0 drops the classifier head
};

/// Builds the network for `layout` with skip sets `skips` (empty = none).
/// A stage pool (alpha x alpha average) precedes every layer whose
/// resolution drops; cross-resolution skips pass through a decimation pool.
/// The head is a global average pool and a dense classifier.
netgraph::NetworkSpec build_network(const CoreLayout& layout, const std::vector<std::vector<int>>& skips = {},
                                    SkipMode mode = SkipMode::Shuffle);

/// Recovers the layout of a planner-built network; SpecError otherwise.
CoreLayout layout_of(const netgraph::NetworkSpec& spec);

struct CoreOptions {
  int input_channels = 3;
  int classes = 10;
  /// Per-layer filters; empty means 3x3 everywhere.
  std::vector<int> filters;
};

/// Skip-free ReLU-balanced core: pools before layers D/3 and 2D/3 and
/// C_1 = floor(R / (D H0^2)). Throws BudgetError when C_1 < 1.
netgraph::NetworkSpec synthesize_core(int depth, int h0, int alpha, std::uint64_t budget,
                                      const CoreOptions& options = {});

/// Rebuilds `core` with the plan's skips and filters in `mode`.
/// SpecError if the plan depth differs from the core depth.
netgraph::NetworkSpec attach_skips(const netgraph::NetworkSpec& core, const SkipPlan& plan, SkipMode mode);

using ModelEvaluator = std::function<double(const netgraph::NetworkSpec&)>;

/// Parameter count as a score. A proxy for trained accuracy only.
double param_count_proxy(const netgraph::NetworkSpec& spec);

struct PlanOptions {
  std::vector<int> depths{6, 12, 24};
  std::uint64_t budget = 0;
  int h0 = 32;
  int alpha = 2;
  int input_channels = 3;
  int classes = 10;
  SkipSearchOracle oracle;
  ModelEvaluator evaluator;  ///< empty selects param_count_proxy
  SkipMode mode = SkipMode::Prune;
};

struct Candidate {
  int depth = 0;
  int c1 = 0;
  netgraph::NetworkSpec spec;
  double score = 0.0;
  std::uint64_t relus = 0;
  std::uint64_t params = 0;
};

struct PlanResult {
  std::vector<Candidate> candidates;  ///< in the order of options.depths
  std::size_t chosen = 0;
  const Candidate& best() const { return candidates.at(chosen); }
};

/// Per depth: core, oracle plan, attach in `mode`. When the attached
/// network exceeds the budget (extra ReLUs in shuffle and conventional
/// modes), C_1 is lowered until it fits. Selects the evaluator's argmax,
/// ties toward smaller depth, then fewer parameters.
PlanResult plan_all(const PlanOptions& options);
netgraph::NetworkSpec plan(const PlanOptions& options);

}  // namespace ciphernet::planner
