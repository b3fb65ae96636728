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

#include "ciphernet/netgraph/tensor.hpp"
#include "ciphernet/protocol/compiled_net.hpp"
#include "ciphernet/protocol/offline.hpp"
#include "ciphernet/protocol/transcript.hpp"
#include "ciphernet/protocol/transport.hpp"

namespace ciphernet::protocol {

/// Online server: holds the weights, evaluates linear layers on its shares
/// with the bound triples, garbles nothing online (tables come from the
/// dealer) and decodes every gadget's output labels.
class ServerSession {
 public:
  ServerSession(const CompiledNet& net, ServerBundle bundle, Channel& channel);
  /// Runs one inference and returns the server's transcript.
  Transcript run();

 private:
  void handshake();
  void linear(std::size_t pos);
  void relu(std::size_t pos);
  void finish();

  const CompiledNet& net_;
  ServerBundle bundle_;
  Channel& ch_;
  std::map<int, std::vector<std::uint64_t>> shares_;
  Transcript transcript_;
  bool used_ = false;
};

struct ClientResult {
  /// Reconstructed output at the last node's scale exponent.
  netgraph::TensorQ output;
  Transcript transcript;
};

/// Online client: masks its input, requests labels for its gadget inputs,
/// evaluates the garbled tables and reconstructs the final output.
class ClientSession {
 public:
  ClientSession(const CompiledNet& net, ClientBundle bundle, Channel& channel);
  ClientResult run(const netgraph::TensorQ& input);

 private:
  void handshake();
  void linear(std::size_t pos, const netgraph::TensorQ& input);
  void relu(std::size_t pos);
  netgraph::TensorQ finish();

  const CompiledNet& net_;
  ClientBundle bundle_;
  Channel& ch_;
  std::map<int, std::vector<std::uint64_t>> shares_;
  Transcript transcript_;
  bool used_ = false;
};

struct LocalRun {
  netgraph::TensorQ output;
  Transcript client;
  Transcript server;
};

/// Dealer, server and client in one process over a socket pair. The server
/// runs on a separate thread.
LocalRun run_local(const CompiledNet& server_net, const CompiledNet& client_net, ClientBundle client,
                   ServerBundle server, const netgraph::TensorQ& input);
LocalRun run_local(const netgraph::NetworkSpec& spec, const netgraph::Weights& weights, const mpcore::FxpConfig& cfg,
                   const netgraph::TensorQ& input, std::uint64_t seed);

}  // namespace ciphernet::protocol
