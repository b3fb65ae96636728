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
#include <utility>

#include "ciphernet/netgraph/spec.hpp"

namespace ciphernet::rewrites {

struct RewriteReport {
  std::uint64_t relus_before = 0;
  std::uint64_t relus_after = 0;
  double reduction_ratio = 1.0;  ///< before / after
  bool functionally_equivalent = true;
};

/// Moves every multi-input Relu ahead of its skip fan-in: the Relu keeps only
/// its own producer, and each consumer of the Relu instead concatenates the
/// Relu with the existing Relus of the forwarded producers. Decimation pools
/// on a skip path are re-pointed at the source's Relu, which commutes with
/// them. The result computes the same function for all weights.
///
/// A spec without multi-input Relus and without multi-input ConcatReshapes
/// is returned unchanged. Throws SpecError if the graph is already shuffled
/// or pruned, or a forwarded value has no Relu of its own to reuse.
std::pair<netgraph::NetworkSpec, RewriteReport> shuffle(const netgraph::NetworkSpec& spec);

/// Shuffles when needed, then drops every Relu whose input is a
/// ConcatReshape so that only the per-layer Relus remain. The 1x1 reshape
/// convolutions stay. functionally_equivalent is true only if nothing was
/// removed.
std::pair<netgraph::NetworkSpec, RewriteReport> prune(const netgraph::NetworkSpec& spec);

/// True iff both specs agree elementwise within `tolerance` on `trials`
/// random inputs in [-1, 1) under shared random weights drawn for `a`.
/// Throws ShapeError if those weights do not fit `b`.
bool verify_equivalence(const netgraph::NetworkSpec& a, const netgraph::NetworkSpec& b, int trials,
                        std::uint64_t seed = 1, double tolerance = 1e-5);

/// "mode,relus_before,relus_after,reduction_ratio,functionally_equivalent"
std::string report_csv(const RewriteReport& report, std::string_view mode);
void write_report_csv(const RewriteReport& report, std::string_view mode, const std::filesystem::path& path);

}  // namespace ciphernet::rewrites
