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

#include "ciphernet/netgraph/counting.hpp"

namespace ciphernet::netgraph {

std::vector<LayerCount> layer_counts(const NetworkSpec& spec) {
  std::vector<LayerCount> rows;
  rows.reserve(spec.nodes().size());
  for (const auto& n : spec.nodes()) {
    LayerCount r;
    r.id = n.id;
    r.kind = n.kind;
    r.out = spec.shape_of(n.id);
    const auto cin = static_cast<std::uint64_t>(spec.input_channels(n.id));
    const auto cout = static_cast<std::uint64_t>(r.out.channels);
    const auto hw = static_cast<std::uint64_t>(r.out.height) * static_cast<std::uint64_t>(r.out.height);
    switch (n.kind) {
      case LayerKind::Relu: r.relus = r.out.elements(); break;
      case LayerKind::Conv: {
        const auto ff = static_cast<std::uint64_t>(n.filter) * static_cast<std::uint64_t>(n.filter);
        r.macs = hw * cout * ff * cin;
        r.params = ff * cin * cout + cout;
        break;
      }
      case LayerKind::ConcatReshape:
        r.macs = hw * cout * cin;
        r.params = cin * cout + cout;
        break;
      case LayerKind::Dense: {
        const auto in = static_cast<std::uint64_t>(spec.shape_of(n.inputs.front()).elements());
        r.macs = in * cout;
        r.params = in * cout + cout;
        break;
      }
      case LayerKind::Pool: break;
    }
    rows.push_back(r);
  }
  return rows;
}

std::uint64_t relu_count(const NetworkSpec& spec) {
  std::uint64_t s = 0;
  for (const auto& r : layer_counts(spec)) s += r.relus;
  return s;
}

std::uint64_t flop_count(const NetworkSpec& spec) {
  std::uint64_t s = 0;
  for (const auto& r : layer_counts(spec)) s += r.macs;
  return s;
}

std::uint64_t param_count(const NetworkSpec& spec) {
  std::uint64_t s = 0;
  for (const auto& r : layer_counts(spec)) s += r.params;
  return s;
}

}  // namespace ciphernet::netgraph
