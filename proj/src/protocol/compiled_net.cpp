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

#include "ciphernet/protocol/compiled_net.hpp"

#include <algorithm>
#include <limits>
#include <mutex>

#include "ciphernet/crypto/prg.hpp"
#include "ciphernet/error.hpp"
#include "ciphernet/garble/relu_circuit.hpp"
#include "ciphernet/kernels/field_kernels.hpp"
#include "ciphernet/netgraph/spec_io.hpp"

namespace ciphernet::protocol {

using netgraph::kNetworkInput;
using netgraph::LayerKind;

namespace {
std::mutex circuit_mutex;
}

CompiledNet::CompiledNet(const netgraph::NetworkSpec& spec, const mpcore::FxpConfig& cfg,
                         const netgraph::Weights* weights)
    : spec_(spec), cfg_(cfg), field_(cfg.modulus), plan_(netgraph::plan_scales(spec, cfg.frac_bits)) {
  cfg_.validate();
  spec_digest_ = crypto::fnv1a64(netgraph::to_json(spec_));
  std::optional<netgraph::QuantizedWeights> qw;
  if (weights) qw = netgraph::quantize_weights(spec_, *weights, plan_, field_);

  bool found_input = false;
  const auto& specs = spec_.nodes();
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const auto& s = specs[i];
    CompiledNode n;
    n.id = s.id;
    n.kind = s.kind;
    n.inputs = s.inputs;
    n.in_height = spec_.input_height(s.id);
    n.out = spec_.shape_of(s.id);
    n.in_size = static_cast<std::size_t>(n.in_height) * n.in_height * spec_.input_channels(s.id);
    n.out_size = n.out.elements();
    n.in_exp = plan_.in_exp[i];
    n.out_exp = plan_.out_exp[i];
    n.shift = plan_.shift[i];
    for (int in : s.inputs) {
      const int e = in == kNetworkInput ? plan_.input_exp : plan_.out_exp[spec_.index_of(in)];
      n.align.push_back(n.in_exp - e);
      if (in == kNetworkInput) n.consumes_input = true;
    }
    if (n.consumes_input) {
      if (!n.is_linear())
        throw SpecError(s.id, "the network input may only feed conv, concat_reshape or dense layers under the protocol");
      if (!found_input) input_consumer_ = i;
      found_input = true;
    }
    if (s.kind == LayerKind::Pool) {
      n.pool_window = s.filter;
      n.pool_stride = s.stride;
    }
    if (n.is_linear()) {
      n.rows = n.out_size;
      n.cols = n.in_size;
      if (qw) {
        const auto& q = qw->at(s.id);
        if (s.kind == LayerKind::Dense) {
          n.op = mpcore::LinearOp::matrix(s.id, n.rows, n.cols, q.kernel, cfg_.frac_bits);
        } else {
          kernels::ConvGeom g;
          g.height = n.in_height;
          g.in_channels = spec_.input_channels(s.id);
          g.out_channels = s.out_channels;
          g.filter = s.kind == LayerKind::Conv ? s.filter : 1;
          g.stride = s.kind == LayerKind::Conv ? s.stride : 1;
          n.op = mpcore::LinearOp::conv(s.id, g, q.kernel, cfg_.frac_bits);
        }
        n.bias = q.bias;
      }
    }
    if (s.kind == LayerKind::Relu && n.shift >= field_.bits())
      throw OverflowError("layer " + std::to_string(s.id) + ": truncation exceeds the field width");
    nodes_.push_back(std::move(n));
  }
  if (!found_input) throw SpecError("no layer consumes the network input");

  for (std::size_t i = 0; i < nodes_.size(); ++i)
    for (int in : nodes_[i].inputs)
      if (in != kNetworkInput) nodes_[spec_.index_of(in)].last_use = static_cast<std::ptrdiff_t>(i);
}

const garble::BooleanCircuit& CompiledNet::relu_circuit(int shift) const {
  std::lock_guard<std::mutex> lock(circuit_mutex);
  auto it = circuits_.find(shift);
  if (it == circuits_.end())
    it = circuits_
             .emplace(shift, std::make_shared<garble::BooleanCircuit>(
                                 garble::build_relu_circuit(field_.bits(), field_.modulus(), shift)))
             .first;
  return *it->second;
}

std::vector<std::uint64_t> CompiledNet::gather(const CompiledNode& n,
                                               const std::map<int, std::vector<std::uint64_t>>& shares) const {
  std::vector<const std::vector<std::uint64_t>*> parts;
  std::vector<int> channels;
  for (int in : n.inputs) {
    auto it = shares.find(in);
    if (it == shares.end())
      throw ProtocolError("layer " + std::to_string(n.id) + ": missing forwarded share of " +
                          (in == kNetworkInput ? std::string("the network input") : "layer " + std::to_string(in)));
    parts.push_back(&it->second);
    channels.push_back(spec_.shape_of(in).channels);
  }
  const std::size_t pixels = static_cast<std::size_t>(n.in_height) * n.in_height;
  std::size_t total = 0;
  for (int c : channels) total += static_cast<std::size_t>(c);
  std::vector<std::uint64_t> out(pixels * total);
  for (std::size_t k = 0; k < parts.size(); ++k)
    if (parts[k]->size() != pixels * static_cast<std::size_t>(channels[k]))
      throw DesyncError("layer " + std::to_string(n.id) + ": forwarded share has the wrong size");
  std::vector<std::uint64_t> mult(parts.size());
  for (std::size_t k = 0; k < parts.size(); ++k) mult[k] = field_.reduce(static_cast<mpcore::u128>(1) << n.align[k]);
  for (std::size_t px = 0; px < pixels; ++px) {
    std::size_t o = px * total;
    for (std::size_t k = 0; k < parts.size(); ++k) {
      const auto c = static_cast<std::size_t>(channels[k]);
      const std::uint64_t* src = parts[k]->data() + px * c;
      if (n.align[k] == 0)
        std::copy_n(src, c, out.data() + o);
      else
        for (std::size_t j = 0; j < c; ++j) out[o + j] = field_.mul(src[j], mult[k]);
      o += c;
    }
  }
  return out;
}

std::vector<std::uint64_t> CompiledNet::pool(const CompiledNode& n, const std::vector<std::uint64_t>& x) const {
  std::vector<std::uint64_t> out(n.out_size);
  kernels::sum_pool_field(field_, n.in_height, n.out.channels, n.pool_window, n.pool_stride, x, out);
  return out;
}

void CompiledNet::release(std::size_t pos, std::map<int, std::vector<std::uint64_t>>& shares) const {
  for (int in : nodes_[pos].inputs) {
    if (in == kNetworkInput) {
      bool later = false;
      for (std::size_t j = pos + 1; j < nodes_.size() && !later; ++j)
        later = nodes_[j].consumes_input;
      if (!later) shares.erase(in);
      continue;
    }
    if (nodes_[spec_.index_of(in)].last_use == static_cast<std::ptrdiff_t>(pos)) shares.erase(in);
  }
}

}  // namespace ciphernet::protocol
