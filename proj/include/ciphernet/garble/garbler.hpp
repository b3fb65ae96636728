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

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "ciphernet/crypto/block.hpp"
#include "ciphernet/crypto/prg.hpp"
#include "ciphernet/garble/circuit.hpp"
#include "ciphernet/kernels/conv_kernels.hpp"

namespace ciphernet::garble {

using crypto::Block;

/// Evaluator-side material for `count` independent copies of one circuit:
/// four 16-byte rows per AND gate, copies laid out back to back.
struct GarbledTables {
  std::array<std::uint8_t, 32> circuit_hash{};
  std::uint32_t count = 0;
  std::uint32_t and_count = 0;
  std::vector<Block> rows;
};

/// Garbler-side secrets for the same batch. Every wire's one-label is its
/// zero-label xor delta (free-XOR); lsb(delta) = 1 (point-and-permute).
struct GarblerKeys {
  Block delta;
  std::uint32_t count = 0;
  std::vector<Block> input_zero;   // count * num_inputs
  std::vector<Block> output_zero;  // count * outputs
};

/// Tweak of AND gate k of copy e: Block(0, (e << 20) | k).
std::uint64_t gate_tweak(std::uint64_t copy, std::uint64_t gate_index);

/// Garbles `count` copies under one fresh delta. Random labels are drawn
/// from `rng` in a fixed order, so the result does not depend on `exec`.
void garble_batch(const BooleanCircuit& c, std::uint32_t count, crypto::Prg& rng, GarbledTables& tables,
                  GarblerKeys& keys, kernels::Exec exec = kernels::Exec::Parallel);

/// Evaluates every copy; `input_labels` holds count * num_inputs labels in
/// input-wire order. Returns count * outputs labels.
std::vector<Block> evaluate_batch(const BooleanCircuit& c, const GarbledTables& tables,
                                  std::span<const Block> input_labels, kernels::Exec exec = kernels::Exec::Parallel);

/// Maps output labels back to bits. Throws ProtocolError("integrity") when a
/// label is neither of the wire's two valid labels.
std::vector<std::uint8_t> decode_outputs(const BooleanCircuit& c, const GarblerKeys& keys,
                                         std::span<const Block> output_labels);

/// Label of input wire `wire` of copy `copy` carrying `bit`.
Block input_label(const BooleanCircuit& c, const GarblerKeys& keys, std::uint32_t copy, std::uint32_t wire, bool bit);

/// A single garbled gadget, for callers that work one element at a time.
struct GarbledGadget {
  GarbledTables tables;
  GarblerKeys keys;
};

GarbledGadget garble(const BooleanCircuit& c, crypto::Prg& rng);
/// `own_labels` are the evaluator's input labels, `received_labels` the
/// garbler's, each in the circuit's input-list order.
std::vector<Block> evaluate(const BooleanCircuit& c, const GarbledTables& tables, std::span<const Block> own_labels,
                            std::span<const Block> received_labels);

}  // namespace ciphernet::garble
