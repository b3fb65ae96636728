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

#include "ciphernet/netgraph/spec.hpp"

#include <algorithm>
#include <cctype>

#include "ciphernet/error.hpp"

namespace ciphernet::netgraph {

std::string_view to_string(LayerKind kind) {
  switch (kind) {
    case LayerKind::Conv: return "conv";
    case LayerKind::Pool: return "pool";
    case LayerKind::Relu: return "relu";
    case LayerKind::ConcatReshape: return "concat_reshape";
    case LayerKind::Dense: return "dense";
  }
  return "?";
}

LayerKind parse_layer_kind(std::string_view name) {
  std::string s;
  for (char c : name) {
    if (c == '-') c = '_';
    s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  if (s == "conv") return LayerKind::Conv;
  if (s == "pool") return LayerKind::Pool;
  if (s == "relu") return LayerKind::Relu;
  if (s == "concat_reshape" || s == "concatreshape") return LayerKind::ConcatReshape;
  if (s == "dense") return LayerKind::Dense;
  throw SpecError("unknown layer kind '" + std::string(name) + "'");
}

namespace {

bool is_pow2(int x) { return x > 0 && (x & (x - 1)) == 0; }

}  // namespace

NetworkSpec::NetworkSpec(int depth, Shape input, int alpha, std::vector<LayerNode> nodes,
                         std::vector<std::vector<int>> skips)
    : depth_(depth), input_(input), alpha_(alpha), nodes_(std::move(nodes)), skips_(std::move(skips)) {
  validate();
}

void NetworkSpec::validate() {
  if (depth_ < 0) throw SpecError("depth must be non-negative");
  if (input_.height <= 0 || input_.channels <= 0) throw SpecError("input shape must be positive");
  if (alpha_ < 1) throw SpecError("alpha must be >= 1");
  if (nodes_.empty()) throw SpecError("network has no layers");

  std::stable_sort(nodes_.begin(), nodes_.end(), [](const LayerNode& a, const LayerNode& b) { return a.id < b.id; });
  index_.clear();
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].id < 0) throw SpecError(nodes_[i].id, "layer ids must be non-negative");
    if (!index_.emplace(nodes_[i].id, i).second) throw SpecError(nodes_[i].id, "duplicate layer id");
  }

  shapes_.assign(nodes_.size(), Shape{});
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    LayerNode& n = nodes_[i];
    if (n.inputs.empty()) throw SpecError(n.id, "layer has no inputs");
    for (int in : n.inputs) {
      if (in >= n.id) throw SpecError(n.id, "cycle: input " + std::to_string(in) + " is not an earlier layer");
      if (in != kNetworkInput && !index_.count(in)) throw SpecError(n.id, "unknown input " + std::to_string(in));
      if (in < kNetworkInput) throw SpecError(n.id, "invalid input id " + std::to_string(in));
    }
    const bool single = n.kind == LayerKind::Conv || n.kind == LayerKind::Pool || n.kind == LayerKind::Dense;
    if (single && n.inputs.size() != 1) throw SpecError(n.id, std::string(to_string(n.kind)) + " takes exactly one input");

    const int h = shape_of(n.inputs.front()).height;
    int cin = 0;
    for (int in : n.inputs) {
      Shape s = shape_of(in);
      if (s.height != h)
        throw SpecError(n.id, "shape mismatch: concatenated inputs have resolutions " + std::to_string(h) + " and " +
                                  std::to_string(s.height));
      cin += s.channels;
    }

    Shape out{};
    switch (n.kind) {
      case LayerKind::Conv:
        if (n.filter < 1 || n.filter % 2 == 0) throw SpecError(n.id, "conv filter size must be odd and positive");
        if (n.out_channels < 1) throw SpecError(n.id, "conv needs out_channels >= 1");
        if (n.stride < 1 || h % n.stride != 0)
          throw SpecError(n.id, "resolution " + std::to_string(h) + " not divisible by stride " + std::to_string(n.stride));
        out = {h / n.stride, n.out_channels};
        break;
      case LayerKind::Pool:
        if (!is_pow2(n.filter)) throw SpecError(n.id, "pool window must be a power of two");
        if (n.stride < n.filter) throw SpecError(n.id, "pool stride must be >= window");
        if (h % n.stride != 0)
          throw SpecError(n.id, "resolution " + std::to_string(h) + " not divisible by stride " + std::to_string(n.stride));
        if (n.out_channels != 0 && n.out_channels != cin) throw SpecError(n.id, "pool cannot change channel count");
        n.out_channels = cin;
        out = {h / n.stride, cin};
        break;
      case LayerKind::Relu:
        if (n.out_channels != 0 && n.out_channels != cin) throw SpecError(n.id, "relu cannot change channel count");
        if (n.stride != 1 && n.stride != 0) throw SpecError(n.id, "relu stride must be 1");
        n.out_channels = cin;
        n.stride = 1;
        n.filter = 0;
        out = {h, cin};
        break;
      case LayerKind::ConcatReshape:
        if (n.filter == 0) n.filter = 1;
        if (n.filter != 1) throw SpecError(n.id, "concat_reshape carries a 1x1 convolution");
        if (n.stride != 1 && n.stride != 0) throw SpecError(n.id, "concat_reshape stride must be 1");
        if (n.out_channels < 1) throw SpecError(n.id, "concat_reshape needs out_channels >= 1");
        n.stride = 1;
        out = {h, n.out_channels};
        break;
      case LayerKind::Dense:
        if (n.out_channels < 1) throw SpecError(n.id, "dense needs out_channels >= 1");
        n.filter = 0;
        n.stride = 1;
        out = {1, n.out_channels};
        break;
    }
    shapes_[i] = out;
  }

  if (!skips_.empty()) {
    if (static_cast<int>(skips_.size()) != depth_)
      throw SpecError("skips must list one set per core layer (" + std::to_string(depth_) + ")");
    for (int i = 0; i < depth_; ++i) {
      for (int k : skips_[static_cast<std::size_t>(i)]) {
        if (k < 0 || k >= i)
          throw SpecError("skip set of layer " + std::to_string(i) + " references layer " + std::to_string(k));
      }
    }
  }
}

const LayerNode& NetworkSpec::node(int id) const { return nodes_[index_of(id)]; }

std::size_t NetworkSpec::index_of(int id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw SpecError(id, "no such layer");
  return it->second;
}

Shape NetworkSpec::shape_of(int id) const {
  if (id == kNetworkInput) return input_;
  return shapes_[index_of(id)];
}

int NetworkSpec::input_channels(int id) const {
  int c = 0;
  for (int in : node(id).inputs) c += shape_of(in).channels;
  return c;
}

int NetworkSpec::input_height(int id) const { return shape_of(node(id).inputs.front()).height; }

std::vector<int> NetworkSpec::consumers(int id) const {
  std::vector<int> out;
  for (const auto& n : nodes_)
    if (std::find(n.inputs.begin(), n.inputs.end(), id) != n.inputs.end()) out.push_back(n.id);
  return out;
}

}  // namespace ciphernet::netgraph
