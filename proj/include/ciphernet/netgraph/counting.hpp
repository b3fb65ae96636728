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

#include "ciphernet/netgraph/spec.hpp"

namespace ciphernet::netgraph {

/// Per-node accounting row.
struct LayerCount {
  int id = 0;
  LayerKind kind = LayerKind::Conv;
  Shape out;
  std::uint64_t relus = 0;
  std::uint64_t macs = 0;
  std::uint64_t params = 0;
};

std::vector<LayerCount> layer_counts(const NetworkSpec& spec);

/// Sum of output elements over Relu nodes.
std::uint64_t relu_count(const NetworkSpec& spec);
/// Multiply-accumulates of Conv, ConcatReshape and Dense nodes.
std::uint64_t flop_count(const NetworkSpec& spec);
/// Kernel plus bias entries of Conv, ConcatReshape and Dense nodes.
std::uint64_t param_count(const NetworkSpec& spec);

}  // namespace ciphernet::netgraph
