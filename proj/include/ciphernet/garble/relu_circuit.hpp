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

#include "ciphernet/garble/circuit.hpp"

namespace ciphernet::garble {

/// Share-in/share-out ReLU with truncation. Inputs (little-endian, l bits
/// each): wires [0, l) = q^S (garbler), [l, 2l) = q^C, [2l, 3l) = r
/// (evaluator). Output (l bits):
///   t = (q^S + q^C) mod p
///   z = t >= (p+1)/2 ? 0 : t
///   out = ((z >> shift) - r) mod p
/// Requires p < 2^l and inputs already reduced below p.
BooleanCircuit build_relu_circuit(int bit_width, std::uint64_t p, int shift);

/// Direct integer form of the same function.
std::uint64_t relu_reference(std::uint64_t q_server, std::uint64_t q_client, std::uint64_t r, std::uint64_t p,
                             int shift);

/// Packs the three operands into the circuit's input bit order.
std::vector<std::uint8_t> relu_input_bits(std::uint64_t q_server, std::uint64_t q_client, std::uint64_t r,
                                          int bit_width);
std::uint64_t bits_to_word(std::span<const std::uint8_t> bits);

}  // namespace ciphernet::garble
