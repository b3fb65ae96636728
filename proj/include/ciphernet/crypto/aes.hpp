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

#include <cstddef>
#include <span>

#include "ciphernet/crypto/block.hpp"

namespace ciphernet::crypto {

/// AES-128 encryption with an expanded key schedule (AES-NI).
class Aes128 {
 public:
  explicit Aes128(const Block& key);

  Block encrypt(const Block& in) const;
  /// Encrypts `blocks` in place; pipelines eight blocks at a time.
  void encrypt_many(std::span<Block> blocks) const;

 private:
  __m128i round_keys_[11];
};

/// The fixed-key permutation shared by garbler and evaluator.
const Aes128& fixed_key_aes();

/// Tweakable correlation-robust hash used for garbled rows:
///   K = 2A xor 4B xor T,  H(A, B, T) = AES_fixed(K) xor K
/// where 2X denotes gf_double(X) and T = Block(0, gate_id).
Block gate_hash(const Block& a, const Block& b, std::uint64_t gate_id);

/// Batched gate_hash: out[i] = H(a[i], b[i], tweak[i]).
void gate_hash_many(std::span<const Block> a, std::span<const Block> b,
                    std::span<const std::uint64_t> tweak, std::span<Block> out);

/// True when the running CPU exposes the AES instructions.
bool cpu_has_aesni();

}  // namespace ciphernet::crypto
