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
#include <memory>
#include <optional>
#include <vector>

#include "ciphernet/garble/circuit.hpp"
#include "ciphernet/mpcore/field.hpp"
#include "ciphernet/mpcore/fixed_point.hpp"
#include "ciphernet/mpcore/linear_op.hpp"
#include "ciphernet/netgraph/infer.hpp"
#include "ciphernet/netgraph/spec.hpp"
#include "ciphernet/netgraph/weights.hpp"

namespace ciphernet::protocol {

/// Per-node view of a network lowered onto the field. Weighted nodes carry
/// their encoded map only when weights were supplied (dealer, server).
struct CompiledNode {
  int id = 0;
  netgraph::LayerKind kind = netgraph::LayerKind::Conv;
  std::vector<int> inputs;
  /// Per input: power of two the share is multiplied by before concatenation.
  std::vector<int> align;
  int in_height = 0;
  netgraph::Shape out;
  std::size_t in_size = 0;
  std::size_t out_size = 0;
  int in_exp = 0;
  int out_exp = 0;
  int shift = 0;
  int pool_window = 0;
  int pool_stride = 0;
  bool consumes_input = false;
  /// Last node (by position) reading this node's output; -1 for the output.
  std::ptrdiff_t last_use = -1;
  std::optional<mpcore::LinearOp> op;
  std::vector<std::uint64_t> bias;
  /// rows/cols of the linear map, known without weights.
  std::size_t rows = 0;
  std::size_t cols = 0;

  bool is_linear() const {
    return kind == netgraph::LayerKind::Conv || kind == netgraph::LayerKind::ConcatReshape ||
           kind == netgraph::LayerKind::Dense;
  }
};

class CompiledNet {
 public:
  /// `weights` may be null for the client, which never sees them.
  CompiledNet(const netgraph::NetworkSpec& spec, const mpcore::FxpConfig& cfg, const netgraph::Weights* weights);

  const netgraph::NetworkSpec& spec() const { return spec_; }
  const mpcore::FxpConfig& config() const { return cfg_; }
  const mpcore::Field& field() const { return field_; }
  int bit_width() const { return field_.bits(); }
  const std::vector<CompiledNode>& nodes() const { return nodes_; }
  const netgraph::ScalePlan& scales() const { return plan_; }
  /// Digest of the canonical spec serialization.
  std::uint64_t spec_digest() const { return spec_digest_; }
  /// Position of the first linear node reading the network input.
  std::size_t input_consumer() const { return input_consumer_; }

  /// ReLU circuit for a truncation amount, built once and cached.
  const garble::BooleanCircuit& relu_circuit(int shift) const;

  /// Aligned channel concatenation of a node's input shares, fetched from
  /// `shares` (keyed by node id, kNetworkInput for the input). Throws
  /// ProtocolError if a forwarded share is missing.
  std::vector<std::uint64_t> gather(const CompiledNode& n,
                                    const std::map<int, std::vector<std::uint64_t>>& shares) const;
  /// Local window-sum pooling of one share.
  std::vector<std::uint64_t> pool(const CompiledNode& n, const std::vector<std::uint64_t>& x) const;
  /// Drops shares whose last consumer is at position `pos`.
  void release(std::size_t pos, std::map<int, std::vector<std::uint64_t>>& shares) const;

 private:
  netgraph::NetworkSpec spec_;
  mpcore::FxpConfig cfg_;
  mpcore::Field field_;
  netgraph::ScalePlan plan_;
  std::vector<CompiledNode> nodes_;
  std::uint64_t spec_digest_ = 0;
  std::size_t input_consumer_ = 0;
  mutable std::map<int, std::shared_ptr<garble::BooleanCircuit>> circuits_;
};

}  // namespace ciphernet::protocol
