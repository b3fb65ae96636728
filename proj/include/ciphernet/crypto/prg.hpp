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
#include <span>
#include <string_view>
#include <vector>

#include "ciphernet/crypto/aes.hpp"

namespace ciphernet::crypto {

/// Deterministic AES-CTR pseudo-random generator keyed by a 128-bit seed.
/// All randomness in the project (shares, masks, labels, dealer material)
/// flows through this type so fixed seeds reproduce byte-identical output.
class Prg {
 public:
  explicit Prg(const Block& seed);
  explicit Prg(std::uint64_t seed);

  Block next_block();
  std::uint64_t next_u64();
  bool next_bit();
  void fill(std::span<Block> out);
  void fill_bytes(std::span<std::uint8_t> out);

  /// Uniform integer in [0, bound) by rejection sampling.
  std::uint64_t uniform(std::uint64_t bound);
  /// Uniform double in [lo, hi).
  double uniform_real(double lo, double hi);

  /// Child seed for a named sub-stream; see derive_seed.
  Block fork(std::string_view tag, std::uint64_t index = 0);

 private:
  void refill();

  Aes128 aes_;
  std::uint64_t counter_ = 0;
  Block buffer_[8];
  int used_ = 8;
};

/// Seed derivation (documented in docs/wire.md):
///   seed_block = Block(0, seed)
///   derive_seed(seed_block, tag, index) =
///     AES_{seed_block}(Block(fnv1a64(tag), index)) xor Block(fnv1a64(tag), index)
Block derive_seed(const Block& seed, std::string_view tag, std::uint64_t index = 0);
Block seed_block(std::uint64_t seed);

std::uint64_t fnv1a64(std::string_view data);
std::uint64_t fnv1a64(std::span<const std::uint8_t> data, std::uint64_t h = 0xcbf29ce484222325ull);

}  // namespace ciphernet::crypto
