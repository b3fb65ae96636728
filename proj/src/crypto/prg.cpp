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

#include "ciphernet/crypto/prg.hpp"

#include <cstring>
#include <limits>

namespace ciphernet::crypto {

std::uint64_t fnv1a64(std::span<const std::uint8_t> data, std::uint64_t h) {
  for (std::uint8_t c : data) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::uint64_t fnv1a64(std::string_view data) {
  return fnv1a64(std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>(data.data()), data.size()));
}

Block seed_block(std::uint64_t seed) { return Block(0, seed); }

Block derive_seed(const Block& seed, std::string_view tag, std::uint64_t index) {
  Aes128 aes(seed);
  Block t(fnv1a64(tag), index);
  return aes.encrypt(t) ^ t;
}

Prg::Prg(const Block& seed) : aes_(seed) {}
Prg::Prg(std::uint64_t seed) : aes_(seed_block(seed)) {}

void Prg::refill() {
  for (int i = 0; i < 8; ++i) buffer_[i] = Block(0, counter_++);
  aes_.encrypt_many(std::span<Block>(buffer_, 8));
  used_ = 0;
}

Block Prg::next_block() {
  if (used_ == 8) refill();
  return buffer_[used_++];
}

std::uint64_t Prg::next_u64() { return next_block().lo(); }

bool Prg::next_bit() { return (next_u64() & 1u) != 0; }

void Prg::fill(std::span<Block> out) {
  for (auto& b : out) b = next_block();
}

void Prg::fill_bytes(std::span<std::uint8_t> out) {
  std::size_t i = 0;
  while (i < out.size()) {
    std::uint8_t buf[16];
    next_block().store(buf);
    const std::size_t m = std::min<std::size_t>(16, out.size() - i);
    std::memcpy(out.data() + i, buf, m);
    i += m;
  }
}

std::uint64_t Prg::uniform(std::uint64_t bound) {
  if (bound <= 1) return 0;
  // Rejection sampling on the smallest power-of-two range covering bound.
  const int bits = 64 - __builtin_clzll(bound - 1);
  const std::uint64_t mask = bits >= 64 ? std::numeric_limits<std::uint64_t>::max() : ((1ull << bits) - 1);
  for (;;) {
    std::uint64_t x = next_u64() & mask;
    if (x < bound) return x;
  }
}

double Prg::uniform_real(double lo, double hi) {
  const double u = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

Block Prg::fork(std::string_view tag, std::uint64_t index) {
  return derive_seed(next_block(), tag, index);
}

}  // namespace ciphernet::crypto
