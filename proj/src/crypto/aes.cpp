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

#include "ciphernet/crypto/aes.hpp"

#include <wmmintrin.h>

namespace ciphernet::crypto {
namespace {

template <int Rcon>
__m128i expand_step(__m128i key) {
  __m128i t = _mm_aeskeygenassist_si128(key, Rcon);
  t = _mm_shuffle_epi32(t, 0xff);
  key = _mm_xor_si128(key, _mm_slli_si128(key, 4));
  key = _mm_xor_si128(key, _mm_slli_si128(key, 4));
  key = _mm_xor_si128(key, _mm_slli_si128(key, 4));
  return _mm_xor_si128(key, t);
}

}  // namespace

Aes128::Aes128(const Block& key) {
  round_keys_[0] = key.v;
  round_keys_[1] = expand_step<0x01>(round_keys_[0]);
  round_keys_[2] = expand_step<0x02>(round_keys_[1]);
  round_keys_[3] = expand_step<0x04>(round_keys_[2]);
  round_keys_[4] = expand_step<0x08>(round_keys_[3]);
  round_keys_[5] = expand_step<0x10>(round_keys_[4]);
  round_keys_[6] = expand_step<0x20>(round_keys_[5]);
  round_keys_[7] = expand_step<0x40>(round_keys_[6]);
  round_keys_[8] = expand_step<0x80>(round_keys_[7]);
  round_keys_[9] = expand_step<0x1b>(round_keys_[8]);
  round_keys_[10] = expand_step<0x36>(round_keys_[9]);
}

Block Aes128::encrypt(const Block& in) const {
  __m128i x = _mm_xor_si128(in.v, round_keys_[0]);
  for (int r = 1; r < 10; ++r) x = _mm_aesenc_si128(x, round_keys_[r]);
  return Block(_mm_aesenclast_si128(x, round_keys_[10]));
}

void Aes128::encrypt_many(std::span<Block> blocks) const {
  std::size_t i = 0;
  const std::size_t n = blocks.size();
  for (; i + 8 <= n; i += 8) {
    __m128i x[8];
    for (int k = 0; k < 8; ++k) x[k] = _mm_xor_si128(blocks[i + k].v, round_keys_[0]);
    for (int r = 1; r < 10; ++r)
      for (int k = 0; k < 8; ++k) x[k] = _mm_aesenc_si128(x[k], round_keys_[r]);
    for (int k = 0; k < 8; ++k) blocks[i + k].v = _mm_aesenclast_si128(x[k], round_keys_[10]);
  }
  for (; i < n; ++i) blocks[i] = encrypt(blocks[i]);
}

const Aes128& fixed_key_aes() {
  // Public constant: the first 128 bits of the fractional part of pi.
  static const Aes128 aes(Block(0x243f6a8885a308d3ull, 0x13198a2e03707344ull));
  return aes;
}

Block gate_hash(const Block& a, const Block& b, std::uint64_t gate_id) {
  Block k = gf_double(a) ^ gf_double(gf_double(b)) ^ Block(0, gate_id);
  return fixed_key_aes().encrypt(k) ^ k;
}

void gate_hash_many(std::span<const Block> a, std::span<const Block> b,
                    std::span<const std::uint64_t> tweak, std::span<Block> out) {
  const std::size_t n = out.size();
  for (std::size_t i = 0; i < n; ++i) out[i] = gf_double(a[i]) ^ gf_double(gf_double(b[i])) ^ Block(0, tweak[i]);
  constexpr std::size_t kChunk = 64;
  Block tmp[kChunk];
  for (std::size_t base = 0; base < n; base += kChunk) {
    const std::size_t m = std::min(kChunk, n - base);
    for (std::size_t i = 0; i < m; ++i) tmp[i] = out[base + i];
    fixed_key_aes().encrypt_many(std::span<Block>(tmp, m));
    for (std::size_t i = 0; i < m; ++i) out[base + i] ^= tmp[i];
  }
}

bool cpu_has_aesni() { return __builtin_cpu_supports("aes") != 0; }

}  // namespace ciphernet::crypto
