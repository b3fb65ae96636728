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

#include "ciphernet/garble/garbler.hpp"
#include "ciphernet/garble/ot.hpp"
#include "ciphernet/mpcore/linear_op.hpp"
#include "ciphernet/protocol/compiled_net.hpp"

namespace ciphernet::protocol {

/// Facts both parties must agree on before the online phase.
struct BundleHeader {
  std::uint64_t modulus = 0;
  int frac_bits = 0;
  int bit_width = 0;
  std::uint64_t spec_digest = 0;
  /// Digest of the dealer seed; both bundles of one dealing share it.
  std::uint64_t dealing_id = 0;

  bool operator==(const BundleHeader&) const = default;
};

struct ClientRelu {
  std::vector<std::uint64_t> r;  // fresh output mask = client's share of the output
  garble::GarbledTables tables;
  std::vector<garble::OtReceiverPad> pads;  // 2l per element: q^C bits then r bits
};

struct ServerRelu {
  garble::GarblerKeys keys;
  std::vector<garble::OtSenderPad> pads;
};

struct ClientBundle {
  BundleHeader header;
  std::vector<std::uint64_t> input_mask;
  std::map<int, mpcore::TripleClient> triples;
  std::map<int, ClientRelu> relus;
};

struct ServerBundle {
  BundleHeader header;
  std::map<int, mpcore::TripleServer> triples;
  std::map<int, ServerRelu> relus;
};

/// Trusted dealer. Walks the network with the client's shares (all of which
/// it chooses), binds one triple per linear node to the client's share of
/// that node's aligned input, and garbles one gadget batch per Relu.
/// Every layer draws from its own derived stream, so the output depends
/// only on (spec, weights, config, seed).
std::pair<ClientBundle, ServerBundle> offline_phase(const CompiledNet& net, std::uint64_t seed);

}  // namespace ciphernet::protocol
