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

namespace ciphernet::garble {

enum class GateKind : std::uint8_t { And = 0, Xor = 1, Not = 2 };

/// Two-input gate; NOT ignores in1.
struct Gate {
  GateKind kind = GateKind::Xor;
  std::uint32_t in0 = 0;
  std::uint32_t in1 = 0;
  std::uint32_t out = 0;
};

/// Topologically ordered boolean circuit. Wires 0..num_inputs-1 are inputs;
/// every gate writes a fresh wire.
struct BooleanCircuit {
  std::uint32_t wire_count = 0;
  std::uint32_t num_inputs = 0;
  std::vector<Gate> gates;
  /// Input wires fed by the garbler and by the evaluator.
  std::vector<std::uint32_t> garbler_inputs;
  std::vector<std::uint32_t> evaluator_inputs;
  std::vector<std::uint32_t> outputs;

  std::size_t and_count() const;
  /// Plaintext evaluation; `inputs` holds one bit per input wire.
  std::vector<std::uint8_t> evaluate(std::span<const std::uint8_t> inputs) const;
  /// SHA-256 over the canonical encoding (see docs/wire.md).
  std::array<std::uint8_t, 32> hash() const;
  /// Throws SpecError on a non-topological or multiply-assigned wire.
  void validate() const;
};

/// A wire reference that may be a folded constant.
struct Wire {
  std::int64_t id = -1;  // -1 when constant
  bool value = false;    // constant value

  bool is_const() const { return id < 0; }
  static Wire constant(bool v) { return Wire{-1, v}; }
};

/// Gate-level builder with constant folding: gates whose result is fixed
/// or equal to an input are never emitted.
class CircuitBuilder {
 public:
  explicit CircuitBuilder(std::uint32_t num_inputs);

  Wire input(std::uint32_t i) const;
  Wire XOR(Wire a, Wire b);
  Wire AND(Wire a, Wire b);
  Wire NOT(Wire a);
  Wire OR(Wire a, Wire b) { return NOT(AND(NOT(a), NOT(b))); }
  /// s ? b : a
  Wire MUX(Wire s, Wire a, Wire b) { return XOR(a, AND(s, XOR(a, b))); }

  /// Little-endian ripple-carry a + b + cin over max(|a|, |b|) bits; the
  /// carry-out is appended as the final element.
  std::vector<Wire> add(std::span<const Wire> a, std::span<const Wire> b, Wire cin = Wire::constant(false));
  std::vector<Wire> constant_word(std::uint64_t value, std::size_t bits) const;

  /// Finalizes: constant outputs are materialized from input wire 0.
  BooleanCircuit finish(std::span<const Wire> outputs, std::vector<std::uint32_t> garbler_inputs,
                        std::vector<std::uint32_t> evaluator_inputs);

 private:
  std::uint32_t emit(GateKind kind, std::uint32_t a, std::uint32_t b);

  std::uint32_t num_inputs_;
  std::uint32_t next_wire_;
  std::vector<Gate> gates_;
};

}  // namespace ciphernet::garble
