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
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace ciphernet::planner {

/// Skip sources and filter size per core layer. An empty `filters` keeps the
/// core's filters.
struct SkipPlan {
  int depth = 0;
  std::vector<int> filters;
  std::vector<std::vector<int>> skips;

  /// Throws SpecError unless S_i is a sorted, duplicate-free subset of
  /// {0..i-1} and every filter is 3 or 5.
  void validate() const;
  bool empty() const;
  bool operator==(const SkipPlan&) const = default;
};

/// {"depth": D, "filters": [...], "skips": [[...], ...]}
std::string to_json(const SkipPlan& plan);
SkipPlan parse_skip_plan(std::string_view text);
SkipPlan load_skip_plan(const std::filesystem::path& path);
void save_skip_plan(const SkipPlan& plan, const std::filesystem::path& path);

enum class OracleKind { AllSkip, RandomSample, External };

/// Stand-in for the architecture search that proposes skips and filters.
/// Deterministic in its parameters.
struct SkipSearchOracle {
  OracleKind kind = OracleKind::AllSkip;
  int k = 1;                  ///< RandomSample: sources per layer
  std::uint64_t seed = 0;     ///< RandomSample
  std::filesystem::path file; ///< External

  static SkipSearchOracle all_skip();
  static SkipSearchOracle random_sample(int k, std::uint64_t seed);
  static SkipSearchOracle external(std::filesystem::path file);
  /// "allskip", "random:K:SEED" or "file:PATH".
  static SkipSearchOracle parse(std::string_view text);

  /// AllSkip: every earlier layer, 5x5 filters.
  /// RandomSample: min(k, i) distinct earlier layers, filters from {3, 5}.
  /// External: the file's plan; SpecError if its depth differs.
  SkipPlan propose(int depth) const;
  std::string describe() const;
};

}  // namespace ciphernet::planner
