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
#include <map>
#include <vector>

#include "ciphernet/kernels/conv_kernels.hpp"
#include "ciphernet/mpcore/field.hpp"
#include "ciphernet/mpcore/fixed_point.hpp"
#include "ciphernet/netgraph/spec.hpp"
#include "ciphernet/netgraph/tensor.hpp"
#include "ciphernet/netgraph/weights.hpp"

namespace ciphernet::netgraph {

/// Float forward pass. Returns the output of the last node.
TensorF infer_plaintext(const NetworkSpec& spec, const TensorF& input, const Weights& weights,
                        kernels::Exec exec = kernels::Exec::Parallel);

/// Fixed-point exponents along the graph, indexed like spec.nodes().
///   in_exp[i]   exponent every input of node i is aligned to before use
///   out_exp[i]  exponent of node i's output
///   shift[i]    truncation a Relu applies (in_exp - f), 0 elsewhere
/// Linear nodes add f, a 2^k x 2^k average pool adds 2k (its window sum is
/// exact), decimation adds nothing, and a Relu resets to f.
struct ScalePlan {
  int frac_bits = 0;
  int input_exp = 0;
  std::vector<int> in_exp;
  std::vector<int> out_exp;
  std::vector<int> shift;
};

ScalePlan plan_scales(const NetworkSpec& spec, int frac_bits);

/// Weights rounded onto the field: kernel at 2^f, bias at the layer's
/// output exponent. Throws OverflowError if a value leaves the field range.
struct QuantizedLayer {
  std::vector<std::uint64_t> kernel;
  std::vector<std::uint64_t> bias;
};
using QuantizedWeights = std::map<int, QuantizedLayer>;

QuantizedWeights quantize_weights(const NetworkSpec& spec, const Weights& weights, const ScalePlan& plan,
                                  const mpcore::Field& field);

TensorQ encode_tensor(const TensorF& t, const mpcore::FxpConfig& cfg);
TensorF decode_tensor(const TensorQ& t);

/// Exact fixed-point forward pass with the protocol's arithmetic: signed
/// 128-bit integers, concat alignment by 2^d, exact truncation inside each
/// Relu. Throws OverflowError naming the node whose value reaches p/2.
TensorQ infer_fixed(const NetworkSpec& spec, const TensorQ& input, const Weights& weights,
                    const mpcore::FxpConfig& cfg);

}  // namespace ciphernet::netgraph
