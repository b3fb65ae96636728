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

#include "ciphernet/protocol/session.hpp"

#include <chrono>
#include <exception>
#include <thread>

#include "ciphernet/bytes.hpp"
#include "ciphernet/error.hpp"
#include "ciphernet/garble/garbler.hpp"
#include "ciphernet/garble/ot.hpp"
#include "ciphernet/mpcore/linear_op.hpp"

namespace ciphernet::protocol {

using netgraph::kNetworkInput;
using netgraph::LayerKind;
using Clock = std::chrono::steady_clock;

namespace {

constexpr std::uint8_t kHelloMagic[4] = {'C', 'N', 'P', '1'};

std::vector<std::uint8_t> hello_payload(const BundleHeader& h) {
  ByteWriter w;
  w.bytes(kHelloMagic);
  w.u64(h.spec_digest);
  w.u64(h.modulus);
  w.u32(static_cast<std::uint32_t>(h.frac_bits));
  w.u64(h.dealing_id);
  return w.take();
}

void check_hello(const Frame& f, const BundleHeader& h) {
  ByteReader r(f.payload, "HELLO");
  auto magic = r.bytes(4);
  if (!std::equal(magic.begin(), magic.end(), kHelloMagic)) throw DesyncError("peer speaks another protocol");
  const auto digest = r.u64();
  const auto p = r.u64();
  const auto f_bits = r.u32();
  const auto dealing = r.u64();
  r.expect_end();
  if (digest != h.spec_digest) throw DesyncError("peer runs a different network spec");
  if (p != h.modulus || static_cast<int>(f_bits) != h.frac_bits) throw DesyncError("peer uses a different field configuration");
  if (dealing != h.dealing_id) throw DesyncError("peer holds offline material from a different dealing");
}

void check_header(const CompiledNet& net, const BundleHeader& h) {
  if (h.modulus != net.field().modulus() || h.frac_bits != net.config().frac_bits || h.bit_width != net.bit_width())
    throw DesyncError("offline bundle was dealt for another field configuration");
  if (h.spec_digest != net.spec_digest()) throw DesyncError("offline bundle was dealt for another network spec");
}

void check_layer(ByteReader& r, int expected, const char* what) {
  const int got = r.i32();
  if (got != expected)
    throw DesyncError(std::string(what) + " for layer " + std::to_string(got) + " while at layer " +
                      std::to_string(expected));
}

double elapsed_ms(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

struct RowScope {
  Transcript& t;
  Channel& ch;
  int layer;
  Phase phase;
  int rounds;
  Clock::time_point t0 = Clock::now();
  std::uint64_t out0 = ch.bytes_sent();
  std::uint64_t in0 = ch.bytes_received();

  void commit() {
    t.rows.push_back({layer, phase, elapsed_ms(t0), ch.bytes_sent() - out0, ch.bytes_received() - in0, rounds});
  }
};

Phase phase_of(LayerKind k) { return k == LayerKind::ConcatReshape ? Phase::Concat : Phase::Linear; }

}  // namespace

// ---------------------------------------------------------------- server

ServerSession::ServerSession(const CompiledNet& net, ServerBundle bundle, Channel& channel)
    : net_(net), bundle_(std::move(bundle)), ch_(channel) {
  check_header(net_, bundle_.header);
}

void ServerSession::handshake() {
  RowScope row{transcript_, ch_, -1, Phase::Handshake, 1};
  check_hello(ch_.expect(MsgType::Hello), bundle_.header);
  const auto p = hello_payload(bundle_.header);
  ch_.send(MsgType::Hello, p);
  row.commit();
}

void ServerSession::linear(std::size_t pos) {
  const CompiledNode& n = net_.nodes()[pos];
  RowScope row{transcript_, ch_, n.id, phase_of(n.kind), 1};
  const Frame f = ch_.expect(MsgType::Share);
  ByteReader r(f.payload, "SHARE");
  check_layer(r, n.id, "SHARE");
  const std::uint8_t has_input = r.u8();
  if (has_input) {
    if (shares_.count(kNetworkInput)) throw DesyncError("masked input sent twice");
    const std::uint64_t count = r.u64();
    if (count != net_.spec().input_shape().elements()) throw DesyncError("masked input has the wrong size");
    auto x = r.u64s(count);
    for (auto& v : x)
      if (v >= net_.field().modulus()) throw DesyncError("masked input holds a value >= p");
    shares_[kNetworkInput] = std::move(x);
  }
  r.expect_end();

  auto it = bundle_.triples.find(n.id);
  if (it == bundle_.triples.end()) throw ExhaustedError("no triple left for layer " + std::to_string(n.id));
  if (!n.op) throw SpecError(n.id, "server is missing the layer's weights");
  const std::vector<std::uint64_t> x = net_.gather(n, shares_);
  mpcore::Share xs{mpcore::Party::Server, x, n.in_exp, net_.field().modulus()};
  mpcore::Share q = mpcore::linear_online(net_.field(), *n.op, n.bias, xs, it->second);
  bundle_.triples.erase(it);
  shares_[n.id] = std::move(q.values);
  net_.release(pos, shares_);
  row.commit();
}

void ServerSession::relu(std::size_t pos) {
  const CompiledNode& n = net_.nodes()[pos];
  RowScope row{transcript_, ch_, n.id, Phase::Relu, 2};
  auto it = bundle_.relus.find(n.id);
  if (it == bundle_.relus.end()) throw ExhaustedError("no garbled gadgets left for layer " + std::to_string(n.id));
  ServerRelu mat = std::move(it->second);
  bundle_.relus.erase(it);

  const garble::BooleanCircuit& c = net_.relu_circuit(n.shift);
  const std::size_t l = static_cast<std::size_t>(net_.bit_width());
  const std::size_t count = n.out_size;
  if (mat.keys.count != count) throw DesyncError("gadget batch size differs for layer " + std::to_string(n.id));
  const std::vector<std::uint64_t> q = net_.gather(n, shares_);

  const Frame req = ch_.expect(MsgType::LabelsReq);
  ByteReader r(req.payload, "LABELS_REQ");
  check_layer(r, n.id, "LABELS_REQ");
  if (r.u64() != count) throw DesyncError("LABELS_REQ element count mismatch");
  const std::size_t nbits = count * 2 * l;
  const auto packed = r.bytes((nbits + 7) / 8);
  r.expect_end();

  garble::OtSender ot(std::move(mat.pads));
  if (ot.size() != nbits) throw DesyncError("OT correlation count differs for layer " + std::to_string(n.id));
  ByteWriter w;
  w.i32(n.id);
  w.u64(count);
  const std::size_t n_in = c.num_inputs;
  for (std::size_t e = 0; e < count; ++e)
    for (std::size_t j = 0; j < l; ++j)
      w.block(garble::input_label(c, mat.keys, static_cast<std::uint32_t>(e), static_cast<std::uint32_t>(j),
                                  (q[e] >> j) & 1u));
  for (std::size_t e = 0; e < count; ++e)
    for (std::size_t j = 0; j < 2 * l; ++j) {
      const std::size_t id = e * 2 * l + j;
      const bool masked = (packed[id / 8] >> (id % 8)) & 1u;
      const crypto::Block z = mat.keys.input_zero[e * n_in + l + j];
      const auto [y0, y1] = ot.respond(id, masked, z, z ^ mat.keys.delta);
      w.block(y0);
      w.block(y1);
    }
  ch_.send(MsgType::Labels, w.data());

  const Frame out = ch_.expect(MsgType::GcOut);
  ByteReader ro(out.payload, "GC_OUT");
  check_layer(ro, n.id, "GC_OUT");
  if (ro.u64() != count) throw DesyncError("GC_OUT element count mismatch");
  const auto labels = ro.blocks(count * l);
  ro.expect_end();
  const auto bits = garble::decode_outputs(c, mat.keys, labels);
  std::vector<std::uint64_t> y(count);
  for (std::size_t e = 0; e < count; ++e) {
    std::uint64_t v = 0;
    for (std::size_t j = 0; j < l; ++j) v |= static_cast<std::uint64_t>(bits[e * l + j]) << j;
    if (v >= net_.field().modulus()) throw ProtocolError("integrity", "gadget output out of field range");
    y[e] = v;
  }
  shares_[n.id] = std::move(y);
  net_.release(pos, shares_);
  row.commit();
}

void ServerSession::finish() {
  RowScope row{transcript_, ch_, -1, Phase::Output, 1};
  const CompiledNode& last = net_.nodes().back();
  auto it = shares_.find(last.id);
  if (it == shares_.end()) throw ProtocolError("output share missing");
  ByteWriter w;
  w.i32(last.id);
  w.i32(last.out_exp);
  w.u64(it->second.size());
  w.u64s(it->second);
  ch_.send(MsgType::Done, w.data());
  row.commit();
}

Transcript ServerSession::run() {
  if (used_) throw ExhaustedError("a session's offline material serves exactly one inference");
  used_ = true;
  handshake();
  for (std::size_t pos = 0; pos < net_.nodes().size(); ++pos) {
    const CompiledNode& n = net_.nodes()[pos];
    if (n.is_linear()) {
      linear(pos);
    } else if (n.kind == LayerKind::Relu) {
      relu(pos);
    } else {
      shares_[n.id] = net_.pool(n, net_.gather(n, shares_));
      net_.release(pos, shares_);
    }
  }
  finish();
  return transcript_;
}

// ---------------------------------------------------------------- client

ClientSession::ClientSession(const CompiledNet& net, ClientBundle bundle, Channel& channel)
    : net_(net), bundle_(std::move(bundle)), ch_(channel) {
  check_header(net_, bundle_.header);
}

void ClientSession::handshake() {
  RowScope row{transcript_, ch_, -1, Phase::Handshake, 1};
  const auto p = hello_payload(bundle_.header);
  ch_.send(MsgType::Hello, p);
  check_hello(ch_.expect(MsgType::Hello), bundle_.header);
  row.commit();
}

void ClientSession::linear(std::size_t pos, const netgraph::TensorQ& input) {
  const CompiledNode& n = net_.nodes()[pos];
  RowScope row{transcript_, ch_, n.id, phase_of(n.kind), 1};
  auto it = bundle_.triples.find(n.id);
  if (it == bundle_.triples.end()) throw ExhaustedError("no triple left for layer " + std::to_string(n.id));
  if (it->second.binding.layer_id != n.id || it->second.binding.rows != n.rows || it->second.binding.cols != n.cols)
    throw DesyncError("layer " + std::to_string(n.id) + ": triple binding does not match the layer shape");
  ByteWriter w;
  w.i32(n.id);
  if (pos == net_.input_consumer()) {
    // Masked input x - r_in; r_in stays as the client's share.
    const mpcore::Field& f = net_.field();
    if (bundle_.input_mask.size() != input.values.size()) throw DesyncError("input mask has the wrong size");
    std::vector<std::uint64_t> masked(input.values.size());
    for (std::size_t i = 0; i < masked.size(); ++i) masked[i] = f.sub(f.reduce(input.values[i]), bundle_.input_mask[i]);
    w.u8(1);
    w.u64(masked.size());
    w.u64s(masked);
    shares_[kNetworkInput] = bundle_.input_mask;
  } else {
    w.u8(0);
  }
  ch_.send(MsgType::Share, w.data());
  (void)net_.gather(n, shares_);  // every forwarded share must still be held
  shares_[n.id] = std::move(it->second.v);
  bundle_.triples.erase(it);
  net_.release(pos, shares_);
  row.commit();
}

void ClientSession::relu(std::size_t pos) {
  const CompiledNode& n = net_.nodes()[pos];
  RowScope row{transcript_, ch_, n.id, Phase::Relu, 2};
  auto it = bundle_.relus.find(n.id);
  if (it == bundle_.relus.end()) throw ExhaustedError("no garbled gadgets left for layer " + std::to_string(n.id));
  ClientRelu mat = std::move(it->second);
  bundle_.relus.erase(it);

  const garble::BooleanCircuit& c = net_.relu_circuit(n.shift);
  const std::size_t l = static_cast<std::size_t>(net_.bit_width());
  const std::size_t count = n.out_size;
  if (mat.r.size() != count || mat.tables.count != count)
    throw DesyncError("gadget batch size differs for layer " + std::to_string(n.id));
  const std::vector<std::uint64_t> q = net_.gather(n, shares_);

  garble::OtReceiver ot(std::move(mat.pads));
  const std::size_t nbits = count * 2 * l;
  if (ot.size() != nbits) throw DesyncError("OT correlation count differs for layer " + std::to_string(n.id));
  std::vector<std::uint8_t> choice(nbits);
  std::vector<std::uint8_t> packed((nbits + 7) / 8, 0);
  for (std::size_t e = 0; e < count; ++e)
    for (std::size_t j = 0; j < 2 * l; ++j) {
      const std::size_t id = e * 2 * l + j;
      const bool b = j < l ? (q[e] >> j) & 1u : (mat.r[e] >> (j - l)) & 1u;
      choice[id] = b;
      if (ot.mask(id, b)) packed[id / 8] |= static_cast<std::uint8_t>(1u << (id % 8));
    }
  ByteWriter w;
  w.i32(n.id);
  w.u64(count);
  w.bytes(packed);
  ch_.send(MsgType::LabelsReq, w.data());

  const Frame f = ch_.expect(MsgType::Labels);
  ByteReader r(f.payload, "LABELS");
  check_layer(r, n.id, "LABELS");
  if (r.u64() != count) throw DesyncError("LABELS element count mismatch");
  const auto garbler = r.blocks(count * l);
  const auto pairs = r.blocks(nbits * 2);
  r.expect_end();

  const std::size_t n_in = c.num_inputs;
  std::vector<crypto::Block> in(count * n_in);
  for (std::size_t e = 0; e < count; ++e) {
    for (std::size_t j = 0; j < l; ++j) in[e * n_in + j] = garbler[e * l + j];
    for (std::size_t j = 0; j < 2 * l; ++j) {
      const std::size_t id = e * 2 * l + j;
      in[e * n_in + l + j] = ot.recover(id, choice[id], pairs[2 * id], pairs[2 * id + 1]);
    }
  }
  const auto out = garble::evaluate_batch(c, mat.tables, in);

  ByteWriter wo;
  wo.i32(n.id);
  wo.u64(count);
  wo.blocks(out);
  ch_.send(MsgType::GcOut, wo.data());
  shares_[n.id] = std::move(mat.r);
  net_.release(pos, shares_);
  row.commit();
}

netgraph::TensorQ ClientSession::finish() {
  RowScope row{transcript_, ch_, -1, Phase::Output, 1};
  const CompiledNode& last = net_.nodes().back();
  const Frame f = ch_.expect(MsgType::Done);
  ByteReader r(f.payload, "DONE");
  check_layer(r, last.id, "DONE");
  const int exp = r.i32();
  if (exp != last.out_exp) throw DesyncError("server reports a different output scale");
  const std::uint64_t count = r.u64();
  if (count != last.out_size) throw DesyncError("DONE element count mismatch");
  const auto server = r.u64s(count);
  r.expect_end();
  auto it = shares_.find(last.id);
  if (it == shares_.end()) throw ProtocolError("output share missing");
  netgraph::TensorQ out(last.out, exp, net_.field().modulus());
  for (std::size_t i = 0; i < count; ++i) out.values[i] = net_.field().add(net_.field().reduce(server[i]), it->second[i]);
  row.commit();
  return out;
}

ClientResult ClientSession::run(const netgraph::TensorQ& input) {
  if (used_) throw ExhaustedError("a session's offline material serves exactly one inference");
  used_ = true;
  if (input.shape != net_.spec().input_shape()) throw ShapeError("input shape does not match the network input");
  if (input.modulus != net_.field().modulus()) throw ShapeError("modulus mismatch between input and network");
  if (input.scale_exp != net_.scales().input_exp) throw ShapeError("input must be encoded at 2^frac_bits");
  handshake();
  for (std::size_t pos = 0; pos < net_.nodes().size(); ++pos) {
    const CompiledNode& n = net_.nodes()[pos];
    if (n.is_linear()) {
      linear(pos, input);
    } else if (n.kind == LayerKind::Relu) {
      relu(pos);
    } else {
      shares_[n.id] = net_.pool(n, net_.gather(n, shares_));
      net_.release(pos, shares_);
    }
  }
  ClientResult res;
  res.output = finish();
  res.transcript = transcript_;
  return res;
}

// ---------------------------------------------------------------- local

LocalRun run_local(const CompiledNet& server_net, const CompiledNet& client_net, ClientBundle client,
                   ServerBundle server, const netgraph::TensorQ& input) {
  auto channels = Channel::socket_pair();
  Channel& cch = channels.first;
  Channel& sch = channels.second;
  LocalRun result;
  std::exception_ptr server_error;
  std::thread t([&] {
    try {
      ServerSession s(server_net, std::move(server), sch);
      result.server = s.run();
    } catch (...) {
      server_error = std::current_exception();
      sch.close();
    }
  });
  std::exception_ptr client_error;
  try {
    ClientSession c(client_net, std::move(client), cch);
    ClientResult r = c.run(input);
    result.output = std::move(r.output);
    result.client = std::move(r.transcript);
  } catch (...) {
    client_error = std::current_exception();
    cch.close();
  }
  t.join();
  if (server_error) std::rethrow_exception(server_error);
  if (client_error) std::rethrow_exception(client_error);
  return result;
}

LocalRun run_local(const netgraph::NetworkSpec& spec, const netgraph::Weights& weights, const mpcore::FxpConfig& cfg,
                   const netgraph::TensorQ& input, std::uint64_t seed) {
  const CompiledNet server_net(spec, cfg, &weights);
  const CompiledNet client_net(spec, cfg, nullptr);
  auto [cb, sb] = offline_phase(server_net, seed);
  return run_local(server_net, client_net, std::move(cb), std::move(sb), input);
}

}  // namespace ciphernet::protocol
