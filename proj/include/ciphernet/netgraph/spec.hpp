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

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace ciphernet::netgraph {

enum class LayerKind { Conv, Pool, Relu, ConcatReshape, Dense };

std::string_view to_string(LayerKind kind);
LayerKind parse_layer_kind(std::string_view name);

/// Id used in `LayerNode::inputs` to refer to the network input tensor.
inline constexpr int kNetworkInput = -1;

/// Square activation shape H x H x C.
struct Shape {
  int height = 0;
  int channels = 0;

  std::size_t elements() const {
    return static_cast<std::size_t>(height) * static_cast<std::size_t>(height) *
           static_cast<std::size_t>(channels);
  }
  bool operator==(const Shape&) const = default;
};

/// One node of the computation graph.
///
/// Conv           single input, F x F kernel, "same" zero padding, stride s.
/// Pool           single input, average over a `filter` x `filter` window
///                (power of two) moved by `stride`; window 1 is decimation.
/// Relu           one or more inputs, concatenated channel-wise, then max(0, .).
/// ConcatReshape  one or more inputs concatenated channel-wise, then a 1x1 conv.
/// Dense          single input flattened to H*H*C, fully connected.
struct LayerNode {
  int id = 0;
  LayerKind kind = LayerKind::Conv;
  int filter = 0;
  int out_channels = 0;
  int stride = 1;
  std::vector<int> inputs;

  bool has_weights() const {
    return kind == LayerKind::Conv || kind == LayerKind::ConcatReshape || kind == LayerKind::Dense;
  }
  bool operator==(const LayerNode&) const = default;
};

/// A validated feed-forward network. Construction checks every structural
/// invariant; a constructed NetworkSpec is immutable.
class NetworkSpec {
 public:
  NetworkSpec(int depth, Shape input, int alpha, std::vector<LayerNode> nodes,
              std::vector<std::vector<int>> skips = {});

  int depth() const { return depth_; }
  Shape input_shape() const { return input_; }
  int alpha() const { return alpha_; }
  /// Nodes in increasing id order.
  const std::vector<LayerNode>& nodes() const { return nodes_; }
  /// Per core layer, the indices of earlier core layers it takes inputs from.
  const std::vector<std::vector<int>>& skips() const { return skips_; }

  bool contains(int id) const { return index_.count(id) != 0; }
  const LayerNode& node(int id) const;
  std::size_t index_of(int id) const;
  /// Output shape of node `id`, or the network input for kNetworkInput.
  Shape shape_of(int id) const;
  /// Channels entering node `id` (sum over concatenated producers).
  int input_channels(int id) const;
  /// Resolution entering node `id`.
  int input_height(int id) const;
  int output_id() const { return nodes_.back().id; }
  Shape output_shape() const { return shape_of(output_id()); }
  /// Ids of nodes consuming `id` (kNetworkInput allowed).
  std::vector<int> consumers(int id) const;

  bool operator==(const NetworkSpec& o) const {
    return depth_ == o.depth_ && input_ == o.input_ && alpha_ == o.alpha_ && nodes_ == o.nodes_ &&
           skips_ == o.skips_;
  }

 private:
  void validate();

  int depth_;
  Shape input_;
  int alpha_;
  std::vector<LayerNode> nodes_;
  std::vector<std::vector<int>> skips_;
  std::vector<Shape> shapes_;
  std::unordered_map<int, std::size_t> index_;
};

}  // namespace ciphernet::netgraph
