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
#include <vector>

namespace ciphernet::mpcore {

using u128 = unsigned __int128;
using i128 = __int128;

/// Prime field F_p with p < 2^62. Values are plain uint64_t in [0, p).
/// Mersenne moduli (2^31-1, 2^61-1) take a shift-and-add reduction path.
class Field {
 public:
  explicit Field(std::uint64_t p);

  static Field mersenne31() { return Field((1ull << 31) - 1); }
  static Field mersenne61() { return Field((1ull << 61) - 1); }

  std::uint64_t modulus() const { return p_; }
  /// Bit length of p, the garbled-circuit word width.
  int bits() const { return bits_; }
  bool is_mersenne() const { return mersenne_; }

  std::uint64_t add(std::uint64_t a, std::uint64_t b) const {
    std::uint64_t s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  std::uint64_t sub(std::uint64_t a, std::uint64_t b) const { return a >= b ? a - b : a + (p_ - b); }
  std::uint64_t neg(std::uint64_t a) const { return a == 0 ? 0 : p_ - a; }
  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const { return reduce(static_cast<u128>(a) * b); }

  std::uint64_t reduce(u128 x) const {
    if (mersenne_) {
      while (x >> 64) x = (x & p_) + (x >> bits_);
      std::uint64_t y = static_cast<std::uint64_t>(x);
      y = (y & p_) + (y >> bits_);
      y = (y & p_) + (y >> bits_);
      return y >= p_ ? y - p_ : y;
    }
    return static_cast<std::uint64_t>(x % p_);
  }

  std::uint64_t from_signed(i128 v) const {
    i128 r = v % static_cast<i128>(p_);
    if (r < 0) r += p_;
    return static_cast<std::uint64_t>(r);
  }
  /// Signed interpretation: v > p/2 encodes v - p.
  std::int64_t to_signed(std::uint64_t v) const {
    return v > p_ / 2 ? static_cast<std::int64_t>(v) - static_cast<std::int64_t>(p_) : static_cast<std::int64_t>(v);
  }
  bool is_negative(std::uint64_t v) const { return v > p_ / 2; }

  /// Number of products of two field elements that can be summed in a u128
  /// accumulator before a reduction is required.
  std::size_t accumulate_limit() const { return accumulate_limit_; }

  bool operator==(const Field& o) const { return p_ == o.p_; }

 private:
  std::uint64_t p_;
  int bits_;
  bool mersenne_;
  std::size_t accumulate_limit_;
};

bool is_prime(std::uint64_t n);

/// A single element tagged with its modulus; arithmetic between elements of
/// different fields throws ShapeError("modulus mismatch").
struct FieldElement {
  std::uint64_t value = 0;
  std::uint64_t modulus = 0;

  bool operator==(const FieldElement&) const = default;
};

FieldElement make_element(const Field& f, std::uint64_t v);
FieldElement add(const FieldElement& a, const FieldElement& b);
FieldElement sub(const FieldElement& a, const FieldElement& b);
FieldElement mul(const FieldElement& a, const FieldElement& b);

/// Element-wise vector helpers.
void add_into(const Field& f, std::span<std::uint64_t> acc, std::span<const std::uint64_t> x);
std::vector<std::uint64_t> add(const Field& f, std::span<const std::uint64_t> a, std::span<const std::uint64_t> b);
std::vector<std::uint64_t> sub(const Field& f, std::span<const std::uint64_t> a, std::span<const std::uint64_t> b);

}  // namespace ciphernet::mpcore
