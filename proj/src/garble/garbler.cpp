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

#include "ciphernet/garble/garbler.hpp"

#include "ciphernet/crypto/aes.hpp"
#include "ciphernet/error.hpp"

namespace ciphernet::garble {

std::uint64_t gate_tweak(std::uint64_t copy, std::uint64_t gate_index) { return (copy << 20) | gate_index; }

namespace {

void check_circuit(const BooleanCircuit& c) {
  if (c.gates.size() >= (std::size_t{1} << 20)) throw SpecError("circuit has too many gates to garble");
}

/// Garbles copy `e` given its input zero-labels and pre-drawn AND output labels.
void garble_copy(const BooleanCircuit& c, const Block& delta, std::uint32_t e, const Block* in0, const Block* and_out,
                 Block* rows, Block* out0, std::vector<Block>& w) {
  w.resize(c.wire_count);
  for (std::uint32_t i = 0; i < c.num_inputs; ++i) w[i] = in0[i];
  std::size_t a = 0;
  for (std::size_t k = 0; k < c.gates.size(); ++k) {
    const Gate& g = c.gates[k];
    switch (g.kind) {
      case GateKind::Xor: w[g.out] = w[g.in0] ^ w[g.in1]; break;
      case GateKind::Not: w[g.out] = w[g.in0] ^ delta; break;
      case GateKind::And: {
        const Block c0 = and_out[a];
        const std::uint64_t tweak = gate_tweak(e, k);
        for (int x = 0; x < 2; ++x)
          for (int y = 0; y < 2; ++y) {
            const Block A = x ? w[g.in0] ^ delta : w[g.in0];
            const Block B = y ? w[g.in1] ^ delta : w[g.in1];
            const int row = 2 * static_cast<int>(A.lsb()) + static_cast<int>(B.lsb());
            rows[4 * a + row] = crypto::gate_hash(A, B, tweak) ^ ((x & y) ? c0 ^ delta : c0);
          }
        w[g.out] = c0;
        ++a;
        break;
      }
    }
  }
  for (std::size_t o = 0; o < c.outputs.size(); ++o) out0[o] = w[c.outputs[o]];
}

void evaluate_copy(const BooleanCircuit& c, std::uint32_t e, const Block* in, const Block* rows, Block* out,
                   std::vector<Block>& w) {
  w.resize(c.wire_count);
  for (std::uint32_t i = 0; i < c.num_inputs; ++i) w[i] = in[i];
  std::size_t a = 0;
  for (std::size_t k = 0; k < c.gates.size(); ++k) {
    const Gate& g = c.gates[k];
    switch (g.kind) {
      case GateKind::Xor: w[g.out] = w[g.in0] ^ w[g.in1]; break;
      case GateKind::Not: w[g.out] = w[g.in0]; break;
      case GateKind::And: {
        const Block& A = w[g.in0];
        const Block& B = w[g.in1];
        const int row = 2 * static_cast<int>(A.lsb()) + static_cast<int>(B.lsb());
        w[g.out] = crypto::gate_hash(A, B, gate_tweak(e, k)) ^ rows[4 * a + row];
        ++a;
        break;
      }
    }
  }
  for (std::size_t o = 0; o < c.outputs.size(); ++o) out[o] = w[c.outputs[o]];
}

}  // namespace

void garble_batch(const BooleanCircuit& c, std::uint32_t count, crypto::Prg& rng, GarbledTables& tables,
                  GarblerKeys& keys, kernels::Exec exec) {
  check_circuit(c);
  const std::size_t n_in = c.num_inputs;
  const std::size_t n_and = c.and_count();
  const std::size_t n_out = c.outputs.size();

  keys.delta = rng.next_block();
  keys.delta = Block(keys.delta.hi(), keys.delta.lo() | 1u);
  keys.count = count;
  keys.input_zero.assign(count * n_in, Block());
  keys.output_zero.assign(count * n_out, Block());
  rng.fill(keys.input_zero);
  std::vector<Block> and_out(count * n_and);
  rng.fill(and_out);

  tables.circuit_hash = c.hash();
  tables.count = count;
  tables.and_count = static_cast<std::uint32_t>(n_and);
  tables.rows.assign(count * n_and * 4, Block());

  const auto total = static_cast<std::ptrdiff_t>(count);
  if (exec == kernels::Exec::Serial) {
    std::vector<Block> w;
    for (std::ptrdiff_t e = 0; e < total; ++e)
      garble_copy(c, keys.delta, static_cast<std::uint32_t>(e), &keys.input_zero[e * n_in], &and_out[e * n_and],
                  &tables.rows[e * n_and * 4], &keys.output_zero[e * n_out], w);
    return;
  }
#pragma omp parallel
  {
    std::vector<Block> w;
#pragma omp for schedule(static)
    for (std::ptrdiff_t e = 0; e < total; ++e)
      garble_copy(c, keys.delta, static_cast<std::uint32_t>(e), &keys.input_zero[e * n_in], &and_out[e * n_and],
                  &tables.rows[e * n_and * 4], &keys.output_zero[e * n_out], w);
  }
}

std::vector<Block> evaluate_batch(const BooleanCircuit& c, const GarbledTables& tables,
                                  std::span<const Block> input_labels, kernels::Exec exec) {
  check_circuit(c);
  if (tables.circuit_hash != c.hash()) throw ProtocolError("integrity", "garbled tables were built for another circuit");
  const std::size_t n_in = c.num_inputs;
  const std::size_t n_and = c.and_count();
  const std::size_t n_out = c.outputs.size();
  if (tables.and_count != n_and || tables.rows.size() != static_cast<std::size_t>(tables.count) * n_and * 4)
    throw ProtocolError("integrity", "malformed garbled table: row count does not match the circuit");
  if (input_labels.size() != static_cast<std::size_t>(tables.count) * n_in)
    throw ShapeError("expected " + std::to_string(tables.count * n_in) + " input labels, got " +
                     std::to_string(input_labels.size()));
  std::vector<Block> out(static_cast<std::size_t>(tables.count) * n_out);
  const auto total = static_cast<std::ptrdiff_t>(tables.count);
  if (exec == kernels::Exec::Serial) {
    std::vector<Block> w;
    for (std::ptrdiff_t e = 0; e < total; ++e)
      evaluate_copy(c, static_cast<std::uint32_t>(e), &input_labels[e * n_in], &tables.rows[e * n_and * 4],
                    &out[e * n_out], w);
    return out;
  }
#pragma omp parallel
  {
    std::vector<Block> w;
#pragma omp for schedule(static)
    for (std::ptrdiff_t e = 0; e < total; ++e)
      evaluate_copy(c, static_cast<std::uint32_t>(e), &input_labels[e * n_in], &tables.rows[e * n_and * 4],
                    &out[e * n_out], w);
  }
  return out;
}

std::vector<std::uint8_t> decode_outputs(const BooleanCircuit& c, const GarblerKeys& keys,
                                         std::span<const Block> output_labels) {
  if (output_labels.size() != keys.output_zero.size())
    throw ProtocolError("integrity", "expected " + std::to_string(keys.output_zero.size()) + " output labels, got " +
                                         std::to_string(output_labels.size()));
  (void)c;
  std::vector<std::uint8_t> bits(output_labels.size());
  for (std::size_t i = 0; i < output_labels.size(); ++i) {
    const Block& z = keys.output_zero[i];
    if (output_labels[i] == z)
      bits[i] = 0;
    else if (output_labels[i] == (z ^ keys.delta))
      bits[i] = 1;
    else
      throw ProtocolError("integrity", "output label " + std::to_string(i) + " is not a valid label");
  }
  return bits;
}

Block input_label(const BooleanCircuit& c, const GarblerKeys& keys, std::uint32_t copy, std::uint32_t wire, bool bit) {
  const Block z = keys.input_zero.at(static_cast<std::size_t>(copy) * c.num_inputs + wire);
  return bit ? z ^ keys.delta : z;
}

GarbledGadget garble(const BooleanCircuit& c, crypto::Prg& rng) {
  GarbledGadget g;
  garble_batch(c, 1, rng, g.tables, g.keys, kernels::Exec::Serial);
  return g;
}

std::vector<Block> evaluate(const BooleanCircuit& c, const GarbledTables& tables, std::span<const Block> own_labels,
                            std::span<const Block> received_labels) {
  if (tables.count != 1) throw ShapeError("evaluate handles a single gadget; use evaluate_batch");
  if (own_labels.size() != c.evaluator_inputs.size() || received_labels.size() != c.garbler_inputs.size())
    throw ShapeError("exactly one label per input wire is required");
  std::vector<Block> in(c.num_inputs);
  std::vector<std::uint8_t> seen(c.num_inputs, 0);
  for (std::size_t i = 0; i < c.evaluator_inputs.size(); ++i) {
    in[c.evaluator_inputs[i]] = own_labels[i];
    seen[c.evaluator_inputs[i]] = 1;
  }
  for (std::size_t i = 0; i < c.garbler_inputs.size(); ++i) {
    in[c.garbler_inputs[i]] = received_labels[i];
    seen[c.garbler_inputs[i]] = 1;
  }
  for (auto s : seen)
    if (!s) throw ShapeError("an input wire has no label");
  return evaluate_batch(c, tables, in, kernels::Exec::Serial);
}

}  // namespace ciphernet::garble
