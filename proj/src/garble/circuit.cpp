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

#include "ciphernet/garble/circuit.hpp"

#include <openssl/sha.h>

#include <algorithm>

#include "ciphernet/error.hpp"

namespace ciphernet::garble {

std::size_t BooleanCircuit::and_count() const {
  return static_cast<std::size_t>(
      std::count_if(gates.begin(), gates.end(), [](const Gate& g) { return g.kind == GateKind::And; }));
}

std::vector<std::uint8_t> BooleanCircuit::evaluate(std::span<const std::uint8_t> inputs) const {
  if (inputs.size() != num_inputs)
    throw ShapeError("circuit expects " + std::to_string(num_inputs) + " input bits, got " + std::to_string(inputs.size()));
  std::vector<std::uint8_t> w(wire_count, 0);
  for (std::uint32_t i = 0; i < num_inputs; ++i) w[i] = inputs[i] & 1u;
  for (const Gate& g : gates) {
    switch (g.kind) {
      case GateKind::And: w[g.out] = w[g.in0] & w[g.in1]; break;
      case GateKind::Xor: w[g.out] = w[g.in0] ^ w[g.in1]; break;
      case GateKind::Not: w[g.out] = w[g.in0] ^ 1u; break;
    }
  }
  std::vector<std::uint8_t> out(outputs.size());
  for (std::size_t i = 0; i < outputs.size(); ++i) out[i] = w[outputs[i]];
  return out;
}

namespace {

void put_u32(std::vector<std::uint8_t>& b, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) b.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

}  // namespace

std::array<std::uint8_t, 32> BooleanCircuit::hash() const {
  std::vector<std::uint8_t> buf;
  buf.reserve(16 + gates.size() * 13 + (garbler_inputs.size() + evaluator_inputs.size() + outputs.size()) * 4 + 12);
  put_u32(buf, wire_count);
  put_u32(buf, num_inputs);
  put_u32(buf, static_cast<std::uint32_t>(gates.size()));
  for (const Gate& g : gates) {
    buf.push_back(static_cast<std::uint8_t>(g.kind));
    put_u32(buf, g.in0);
    put_u32(buf, g.in1);
    put_u32(buf, g.out);
  }
  for (const auto* list : {&garbler_inputs, &evaluator_inputs, &outputs}) {
    put_u32(buf, static_cast<std::uint32_t>(list->size()));
    for (auto w : *list) put_u32(buf, w);
  }
  std::array<std::uint8_t, 32> digest{};
  SHA256(buf.data(), buf.size(), digest.data());
  return digest;
}

void BooleanCircuit::validate() const {
  std::vector<std::uint8_t> defined(wire_count, 0);
  for (std::uint32_t i = 0; i < num_inputs && i < wire_count; ++i) defined[i] = 1;
  for (std::size_t k = 0; k < gates.size(); ++k) {
    const Gate& g = gates[k];
    const bool unary = g.kind == GateKind::Not;
    if (g.in0 >= wire_count || g.out >= wire_count || (!unary && g.in1 >= wire_count))
      throw SpecError("gate " + std::to_string(k) + " references a wire beyond the circuit");
    if (!defined[g.in0] || (!unary && !defined[g.in1]))
      throw SpecError("gate " + std::to_string(k) + " reads a wire before it is assigned");
    if (defined[g.out]) throw SpecError("gate " + std::to_string(k) + " reassigns wire " + std::to_string(g.out));
    defined[g.out] = 1;
  }
  for (auto o : outputs)
    if (o >= wire_count || !defined[o]) throw SpecError("output wire " + std::to_string(o) + " is never assigned");
}

CircuitBuilder::CircuitBuilder(std::uint32_t num_inputs) : num_inputs_(num_inputs), next_wire_(num_inputs) {
  if (num_inputs == 0) throw SpecError("a circuit needs at least one input wire");
}

Wire CircuitBuilder::input(std::uint32_t i) const {
  if (i >= num_inputs_) throw SpecError("input wire " + std::to_string(i) + " out of range");
  return Wire{static_cast<std::int64_t>(i), false};
}

std::uint32_t CircuitBuilder::emit(GateKind kind, std::uint32_t a, std::uint32_t b) {
  gates_.push_back(Gate{kind, a, b, next_wire_});
  return next_wire_++;
}

Wire CircuitBuilder::XOR(Wire a, Wire b) {
  if (a.is_const() && b.is_const()) return Wire::constant(a.value != b.value);
  if (a.is_const()) std::swap(a, b);
  if (b.is_const()) return b.value ? NOT(a) : a;
  if (a.id == b.id) return Wire::constant(false);
  return Wire{emit(GateKind::Xor, static_cast<std::uint32_t>(a.id), static_cast<std::uint32_t>(b.id)), false};
}

Wire CircuitBuilder::AND(Wire a, Wire b) {
  if (a.is_const() && b.is_const()) return Wire::constant(a.value && b.value);
  if (a.is_const()) std::swap(a, b);
  if (b.is_const()) return b.value ? a : Wire::constant(false);
  if (a.id == b.id) return a;
  return Wire{emit(GateKind::And, static_cast<std::uint32_t>(a.id), static_cast<std::uint32_t>(b.id)), false};
}

Wire CircuitBuilder::NOT(Wire a) {
  if (a.is_const()) return Wire::constant(!a.value);
  return Wire{emit(GateKind::Not, static_cast<std::uint32_t>(a.id), 0), false};
}

std::vector<Wire> CircuitBuilder::add(std::span<const Wire> a, std::span<const Wire> b, Wire cin) {
  const std::size_t n = std::max(a.size(), b.size());
  std::vector<Wire> out;
  out.reserve(n + 1);
  Wire c = cin;
  for (std::size_t i = 0; i < n; ++i) {
    const Wire x = i < a.size() ? a[i] : Wire::constant(false);
    const Wire y = i < b.size() ? b[i] : Wire::constant(false);
    const Wire xc = XOR(x, c);
    const Wire yc = XOR(y, c);
    out.push_back(XOR(xc, y));
    // carry = maj(x, y, c) with one AND
    c = XOR(AND(xc, yc), c);
  }
  out.push_back(c);
  return out;
}

std::vector<Wire> CircuitBuilder::constant_word(std::uint64_t value, std::size_t bits) const {
  std::vector<Wire> w;
  w.reserve(bits);
  for (std::size_t i = 0; i < bits; ++i) w.push_back(Wire::constant(i < 64 && ((value >> i) & 1u)));
  return w;
}

BooleanCircuit CircuitBuilder::finish(std::span<const Wire> outputs, std::vector<std::uint32_t> garbler_inputs,
                                      std::vector<std::uint32_t> evaluator_inputs) {
  BooleanCircuit c;
  c.num_inputs = num_inputs_;
  std::vector<std::uint32_t> outs;
  std::int64_t zero = -1;
  std::int64_t one = -1;
  for (const Wire& w : outputs) {
    if (!w.is_const()) {
      outs.push_back(static_cast<std::uint32_t>(w.id));
      continue;
    }
    if (zero < 0) zero = emit(GateKind::Xor, 0, 0);
    if (!w.value) {
      outs.push_back(static_cast<std::uint32_t>(zero));
    } else {
      if (one < 0) one = emit(GateKind::Not, static_cast<std::uint32_t>(zero), 0);
      outs.push_back(static_cast<std::uint32_t>(one));
    }
  }
  c.wire_count = next_wire_;
  c.gates = gates_;
  c.outputs = std::move(outs);
  c.garbler_inputs = std::move(garbler_inputs);
  c.evaluator_inputs = std::move(evaluator_inputs);
  c.validate();
  return c;
}

}  // namespace ciphernet::garble
