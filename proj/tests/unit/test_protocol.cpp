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

#include <gtest/gtest.h>
#include <sys/socket.h>
#include <unistd.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iterator>

#include "ciphernet/error.hpp"
#include "ciphernet/netgraph/infer.hpp"
#include "ciphernet/netgraph/spec_io.hpp"
#include "ciphernet/protocol/bundle_io.hpp"
#include "ciphernet/protocol/compiled_net.hpp"
#include "ciphernet/protocol/offline.hpp"
#include "ciphernet/protocol/session.hpp"
#include "ciphernet/protocol/transport.hpp"
#include "random_nets.hpp"

using namespace ciphernet;
using namespace ciphernet::protocol;

namespace {

mpcore::FxpConfig wide_cfg() {
  mpcore::FxpConfig c;
  c.modulus = (1ull << 61) - 1;
  c.frac_bits = 12;
  c.max_scale_exponent = 56;
  return c;
}

std::filesystem::path temp_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("ciphernet_proto_" + name);
  std::filesystem::remove_all(p);
  return p;
}

std::vector<std::uint8_t> slurp_dir(const std::filesystem::path& dir) {
  std::vector<std::uint8_t> all;
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::recursive_directory_iterator(dir))
    if (e.is_regular_file()) files.push_back(e.path());
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    std::ifstream in(f, std::ios::binary);
    all.insert(all.end(), std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  }
  return all;
}

int linear_nodes(const netgraph::NetworkSpec& s) {
  int n = 0;
  for (const auto& node : s.nodes()) n += node.has_weights();
  return n;
}

int relu_nodes(const netgraph::NetworkSpec& s) {
  int n = 0;
  for (const auto& node : s.nodes()) n += node.kind == netgraph::LayerKind::Relu;
  return n;
}

}  // namespace

TEST(Transport, FramesAndCountsBytes) {
  auto [a, b] = Channel::socket_pair();
  const std::vector<std::uint8_t> payload{1, 2, 3, 4, 5, 6, 7};
  a.send(MsgType::Share, payload);
  a.send(MsgType::Done, {});
  const Frame f = b.recv();
  EXPECT_EQ(f.type, MsgType::Share);
  EXPECT_EQ(f.payload, payload);
  EXPECT_EQ(a.bytes_sent(), 5u + 7u + 5u);
  EXPECT_THROW(b.expect(MsgType::Labels), DesyncError);
  EXPECT_EQ(b.bytes_received(), a.bytes_sent());
}

TEST(Transport, RejectsOversizedAndTruncatedFrames) {
  int fds[2];
  ASSERT_EQ(::socketpair(AF_UNIX, SOCK_STREAM, 0, fds), 0);
  Channel rx(fds[0]);
  const std::uint8_t huge[5] = {0xFF, 0xFF, 0xFF, 0xFF, 2};
  ASSERT_EQ(::write(fds[1], huge, 5), 5);
  EXPECT_THROW(rx.recv(), ProtocolError);
  const std::uint8_t partial[6] = {0, 0, 0, 10, 2, 9};
  ASSERT_EQ(::write(fds[1], partial, 6), 6);
  ::close(fds[1]);
  EXPECT_THROW(rx.recv(), ProtocolError);
}

TEST(Protocol, OutputEqualsFixedPointOracleOnRandomNets) {
  const auto cfg = wide_cfg();
  for (std::uint64_t seed = 100; seed < 112; ++seed) {
    std::string label;
    const auto spec = testkit::random_net(seed, {}, &label);
    const auto w = netgraph::random_weights(spec, seed, netgraph::WeightInit::ContractiveDyadic, cfg.frac_bits);
    const auto x = netgraph::encode_tensor(testkit::random_input(spec.input_shape(), seed), cfg);
    const auto run = run_local(spec, w, cfg, x, seed);
    const auto want = netgraph::infer_fixed(spec, x, w, cfg);
    EXPECT_EQ(run.output.values, want.values) << label;
    EXPECT_EQ(run.output.scale_exp, want.scale_exp) << label;
    EXPECT_EQ(run.client.layer_rounds(), linear_nodes(spec) + 2 * relu_nodes(spec)) << label;
    EXPECT_EQ(run.server.layer_rounds(), run.client.layer_rounds());
    EXPECT_EQ(run.client.total_bytes_out(), run.server.total_bytes_in());
    EXPECT_EQ(run.server.total_bytes_out(), run.client.total_bytes_in());
  }
}

TEST(Protocol, SmallPrimeEndToEnd) {
  mpcore::FxpConfig cfg;
  cfg.modulus = 251;
  cfg.frac_bits = 1;
  cfg.max_scale_exponent = 4;
  const auto spec = netgraph::parse_spec(R"({"depth": 1, "input": [2, 2, 1], "alpha": 2, "layers": [
      {"id": 1, "kind": "conv", "filter": 1, "out_channels": 2, "inputs": [-1]},
      {"id": 2, "kind": "relu", "inputs": [1]}]})");
  netgraph::Weights w;
  w[1] = {{1.0f, -1.0f}, {0.0f, 0.5f}};
  for (int a = -3; a <= 3; ++a) {
    netgraph::TensorF x({2, 1}, {a * 0.5f, -a * 0.5f, 1.0f, -1.5f});
    const auto xq = netgraph::encode_tensor(x, cfg);
    const auto run = run_local(spec, w, cfg, xq, static_cast<std::uint64_t>(a + 10));
    EXPECT_EQ(run.output.values, netgraph::infer_fixed(spec, xq, w, cfg).values) << a;
  }
}

TEST(Protocol, BundlesRoundTripThroughFiles) {
  const auto cfg = wide_cfg();
  const auto spec = testkit::random_net(7);
  const auto w = netgraph::random_weights(spec, 7, netgraph::WeightInit::ContractiveDyadic, cfg.frac_bits);
  const CompiledNet server_net(spec, cfg, &w);
  const CompiledNet client_net(spec, cfg, nullptr);
  const auto [cb, sb] = offline_phase(server_net, 42);
  const auto dir = temp_dir("bundles");
  save_bundles(dir, server_net, cb, sb);
  EXPECT_TRUE(std::filesystem::exists(dir / "manifest.json"));
  auto cb2 = load_client_bundle(dir);
  auto sb2 = load_server_bundle(dir);
  EXPECT_EQ(cb2.header, cb.header);
  EXPECT_EQ(cb2.input_mask, cb.input_mask);
  const auto x = netgraph::encode_tensor(testkit::random_input(spec.input_shape(), 7), cfg);
  const auto a = run_local(server_net, client_net, cb, sb, x);
  const auto b = run_local(server_net, client_net, std::move(cb2), std::move(sb2), x);
  EXPECT_EQ(a.output.values, b.output.values);

  // Same seed, same bytes.
  const auto [cb3, sb3] = offline_phase(server_net, 42);
  const auto dir2 = temp_dir("bundles2");
  save_bundles(dir2, server_net, cb3, sb3);
  EXPECT_EQ(slurp_dir(dir), slurp_dir(dir2));
  std::filesystem::remove_all(dir);
  std::filesystem::remove_all(dir2);
}

TEST(Protocol, MismatchedDealingsAreRejected) {
  const auto cfg = wide_cfg();
  const auto spec = testkit::random_net(9);
  const auto w = netgraph::random_weights(spec, 9, netgraph::WeightInit::ContractiveDyadic, cfg.frac_bits);
  const CompiledNet server_net(spec, cfg, &w);
  const CompiledNet client_net(spec, cfg, nullptr);
  auto d1 = offline_phase(server_net, 1);
  auto d2 = offline_phase(server_net, 2);
  const auto x = netgraph::encode_tensor(testkit::random_input(spec.input_shape(), 9), cfg);
  EXPECT_THROW(run_local(server_net, client_net, d1.first, d2.second, x), ProtocolError);
}

TEST(Protocol, SpecDisagreementIsDesync) {
  const auto cfg = wide_cfg();
  const auto a = testkit::random_net(21);
  const auto b = testkit::random_net(22);
  ASSERT_NE(netgraph::to_json(a), netgraph::to_json(b));
  const auto w = netgraph::random_weights(a, 1, netgraph::WeightInit::ContractiveDyadic, cfg.frac_bits);
  const CompiledNet server_net(a, cfg, &w);
  const CompiledNet client_net(b, cfg, nullptr);
  auto [cb, sb] = offline_phase(server_net, 3);
  const auto x = netgraph::encode_tensor(testkit::random_input(b.input_shape(), 1), cfg);
  EXPECT_THROW(run_local(server_net, client_net, cb, sb, x), ProtocolError);
}

TEST(Protocol, InputMayOnlyFeedLinearLayers) {
  const auto spec = netgraph::parse_spec(R"({"depth": 1, "input": [2, 2, 1], "alpha": 2, "layers": [
      {"id": 1, "kind": "relu", "inputs": [-1]}]})");
  EXPECT_THROW(CompiledNet(spec, mpcore::FxpConfig{}, nullptr), SpecError);
}

TEST(Protocol, TranscriptCsvHasDocumentedColumns) {
  const auto cfg = wide_cfg();
  const auto spec = testkit::random_net(3);
  const auto w = netgraph::random_weights(spec, 3, netgraph::WeightInit::ContractiveDyadic, cfg.frac_bits);
  const auto x = netgraph::encode_tensor(testkit::random_input(spec.input_shape(), 3), cfg);
  const auto run = run_local(spec, w, cfg, x, 3);
  const std::string csv = run.client.to_csv();
  EXPECT_EQ(csv.rfind("layer,phase,ms,bytes_out,bytes_in,rounds\n", 0), 0u);
  EXPECT_EQ(run.client.count(Phase::Handshake), 1);
  EXPECT_EQ(run.client.count(Phase::Output), 1);
}

TEST(Privacy, MaskedInputResiduesLookUniform) {
  // Fixed input, fresh dealings: the masked input the client sends is
  // x - r_in. Bucket residues mod 16 and run a chi-square test.
  const auto cfg = wide_cfg();
  const auto spec = testkit::random_net(5);
  const auto w = netgraph::random_weights(spec, 5, netgraph::WeightInit::ContractiveDyadic, cfg.frac_bits);
  const CompiledNet net(spec, cfg, &w);
  const auto x = netgraph::encode_tensor(testkit::random_input(spec.input_shape(), 5), cfg);
  std::vector<double> bucket(16, 0.0);
  double total = 0;
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    const auto [cb, sb] = offline_phase(net, seed);
    for (std::size_t i = 0; i < x.values.size(); ++i) {
      const std::uint64_t masked = net.field().sub(x.values[i], cb.input_mask[i]);
      bucket[masked % 16] += 1;
      total += 1;
    }
  }
  double chi = 0;
  for (double b : bucket) chi += (b - total / 16) * (b - total / 16) / (total / 16);
  EXPECT_LT(chi, 37.7);  // 15 dof, p = 0.001
}
