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

#include <emmintrin.h>
#include <smmintrin.h>

#include <array>
#include <cstdint>
#include <cstring>
#include <span>

namespace ciphernet::crypto {

/// A 128-bit value: wire labels, PRG outputs, AES blocks.
struct Block {
  __m128i v = _mm_setzero_si128();

  Block() = default;
  explicit Block(__m128i x) : v(x) {}
  Block(std::uint64_t hi, std::uint64_t lo)
      : v(_mm_set_epi64x(static_cast<long long>(hi), static_cast<long long>(lo))) {}

  std::uint64_t lo() const { return static_cast<std::uint64_t>(_mm_cvtsi128_si64(v)); }
  std::uint64_t hi() const { return static_cast<std::uint64_t>(_mm_extract_epi64(v, 1)); }

  /// Point-and-permute select bit.
  bool lsb() const { return (lo() & 1u) != 0; }

  Block operator^(const Block& o) const { return Block(_mm_xor_si128(v, o.v)); }
  Block& operator^=(const Block& o) {
    v = _mm_xor_si128(v, o.v);
    return *this;
  }
  bool operator==(const Block& o) const {
    __m128i x = _mm_xor_si128(v, o.v);
    return _mm_testz_si128(x, x) != 0;
  }
  bool operator!=(const Block& o) const { return !(*this == o); }

  void store(std::uint8_t* out) const { _mm_storeu_si128(reinterpret_cast<__m128i*>(out), v); }
  static Block load(const std::uint8_t* in) {
    return Block(_mm_loadu_si128(reinterpret_cast<const __m128i*>(in)));
  }
};

inline Block zero_block() { return Block(); }

/// Multiplication by x in GF(2^128) modulo x^128 + x^7 + x^2 + x + 1,
/// with the block read as a little-endian 128-bit integer.
inline Block gf_double(const Block& b) {
  std::uint64_t lo = b.lo();
  std::uint64_t hi = b.hi();
  std::uint64_t carry = hi >> 63;
  hi = (hi << 1) | (lo >> 63);
  lo = (lo << 1) ^ (carry * 0x87u);
  return Block(hi, lo);
}

/// Mask selecting `x` when `bit` is set, zero otherwise.
inline Block select_mask(bool bit, const Block& x) { return bit ? x : Block(); }

}  // namespace ciphernet::crypto
