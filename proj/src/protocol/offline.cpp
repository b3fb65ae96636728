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

#include "ciphernet/protocol/offline.hpp"

#include "ciphernet/error.hpp"
#include "ciphernet/mpcore/sharing.hpp"

namespace ciphernet::protocol {

using netgraph::kNetworkInput;
using netgraph::LayerKind;

std::pair<ClientBundle, ServerBundle> offline_phase(const CompiledNet& net, std::uint64_t seed) {
  const mpcore::Field& field = net.field();
  const crypto::Block root = crypto::derive_seed(crypto::seed_block(seed), "dealer");
  ClientBundle cb;
  ServerBundle sb;
  cb.header = {field.modulus(), net.config().frac_bits, net.bit_width(), net.spec_digest(),
               crypto::derive_seed(root, "dealing-id").lo()};
  sb.header = cb.header;

  const int l = net.bit_width();
  std::map<int, std::vector<std::uint64_t>> client;
  {
    crypto::Prg rng(crypto::derive_seed(root, "input-mask"));
    cb.input_mask = mpcore::random_vector(field, net.spec().input_shape().elements(), rng);
    client[kNetworkInput] = cb.input_mask;
  }

  for (std::size_t pos = 0; pos < net.nodes().size(); ++pos) {
    const CompiledNode& n = net.nodes()[pos];
    crypto::Prg rng(crypto::derive_seed(root, "layer", static_cast<std::uint64_t>(n.id)));
    std::vector<std::uint64_t> x = net.gather(n, client);
    switch (n.kind) {
      case LayerKind::Conv:
      case LayerKind::ConcatReshape:
      case LayerKind::Dense: {
        if (!n.op) throw SpecError(n.id, "the dealer needs the layer's weights");
        auto [s, c] = mpcore::dealer_triples(field, *n.op, x, rng);
        client[n.id] = c.v;
        sb.triples.emplace(n.id, std::move(s));
        cb.triples.emplace(n.id, std::move(c));
        break;
      }
      case LayerKind::Pool: client[n.id] = net.pool(n, x); break;
      case LayerKind::Relu: {
        const auto count = static_cast<std::uint32_t>(n.out_size);
        ClientRelu cr;
        ServerRelu sr;
        cr.r = mpcore::random_vector(field, count, rng);
        garble::garble_batch(net.relu_circuit(n.shift), count, rng, cr.tables, sr.keys);
        auto [sp, rp] = garble::deal_ot(static_cast<std::size_t>(count) * 2 * l, rng);
        sr.pads = std::move(sp);
        cr.pads = std::move(rp);
        client[n.id] = cr.r;
        cb.relus.emplace(n.id, std::move(cr));
        sb.relus.emplace(n.id, std::move(sr));
        break;
      }
    }
    net.release(pos, client);
  }
  return {std::move(cb), std::move(sb)};
}

}  // namespace ciphernet::protocol
