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
#include <map>
#include <vector>

#include "ciphernet/netgraph/spec.hpp"

namespace ciphernet::netgraph {

/// Parameters of one Conv, ConcatReshape or Dense node.
///   Conv:          kernel[co][dy][dx][ci], size C_out * F * F * C_in
///   ConcatReshape: kernel[co][ci],         size C_out * C_in (concatenated)
///   Dense:         kernel[o][i],           size out * (H * H * C), HWC flattening
struct LayerWeights {
  std::vector<float> kernel;
  std::vector<float> bias;
};

/// Weights keyed by layer id, so rewritten specs that keep ids reuse them.
using Weights = std::map<int, LayerWeights>;

std::size_t kernel_size(const NetworkSpec& spec, const LayerNode& node);

/// Throws ShapeError if any weighted node is missing or mis-sized.
void check_weights(const NetworkSpec& spec, const Weights& weights);

enum class WeightInit {
  /// Uniform in +-sqrt(3 / fan_in).
  Scaled,
  /// Dyadic values on the 2^-frac_bits grid with every kernel row's L1 norm
  /// at most 1/2, so fixed-point truncation errors shrink layer to layer.
  ContractiveDyadic,
};

Weights random_weights(const NetworkSpec& spec, std::uint64_t seed, WeightInit init = WeightInit::Scaled,
                       int frac_bits = 8);

/// CNW1 weights file: "CNW1", u32 layer count, per layer (i32 id, u64 count),
/// then every layer's kernel followed by its bias as little-endian float32.
void save_weights(const Weights& weights, const std::filesystem::path& path);
Weights load_weights(const std::filesystem::path& path, const NetworkSpec& spec);

}  // namespace ciphernet::netgraph
