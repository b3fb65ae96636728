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

#include "ciphernet/mpcore/field.hpp"

#include <limits>
#include <string>

#include "ciphernet/error.hpp"

namespace ciphernet::mpcore {
namespace {

std::uint64_t pow_mod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  u128 r = 1, b = a % m;
  while (e) {
    if (e & 1) r = r * b % m;
    b = b * b % m;
    e >>= 1;
  }
  return static_cast<std::uint64_t>(r);
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % q == 0) return n == q;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // Deterministic witness set for 64-bit integers.
  for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    std::uint64_t x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = static_cast<std::uint64_t>(static_cast<u128>(x) * x % n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

Field::Field(std::uint64_t p) : p_(p) {
  if (p < 3 || p >= (1ull << 62)) throw SpecError("modulus must lie in [3, 2^62)");
  if (!is_prime(p)) throw SpecError("modulus " + std::to_string(p) + " is not prime");
  bits_ = 64 - __builtin_clzll(p);
  mersenne_ = ((p + 1) & p) == 0;
  const u128 max_product = static_cast<u128>(p - 1) * (p - 1);
  const u128 limit = std::numeric_limits<u128>::max() / max_product;
  accumulate_limit_ = limit > (1u << 20) ? (1u << 20) : static_cast<std::size_t>(limit);
}

FieldElement make_element(const Field& f, std::uint64_t v) { return {f.reduce(v), f.modulus()}; }

namespace {

Field checked(const FieldElement& a, const FieldElement& b) {
  if (a.modulus != b.modulus)
    throw ShapeError("modulus mismatch: " + std::to_string(a.modulus) + " vs " + std::to_string(b.modulus));
  return Field(a.modulus);
}

}  // namespace

FieldElement add(const FieldElement& a, const FieldElement& b) {
  Field f = checked(a, b);
  return {f.add(a.value, b.value), a.modulus};
}
FieldElement sub(const FieldElement& a, const FieldElement& b) {
  Field f = checked(a, b);
  return {f.sub(a.value, b.value), a.modulus};
}
FieldElement mul(const FieldElement& a, const FieldElement& b) {
  Field f = checked(a, b);
  return {f.mul(a.value, b.value), a.modulus};
}

void add_into(const Field& f, std::span<std::uint64_t> acc, std::span<const std::uint64_t> x) {
  if (acc.size() != x.size()) throw ShapeError("vector length mismatch");
  for (std::size_t i = 0; i < acc.size(); ++i) acc[i] = f.add(acc[i], x[i]);
}

std::vector<std::uint64_t> add(const Field& f, std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
  if (a.size() != b.size()) throw ShapeError("vector length mismatch");
  std::vector<std::uint64_t> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = f.add(a[i], b[i]);
  return out;
}

std::vector<std::uint64_t> sub(const Field& f, std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
  if (a.size() != b.size()) throw ShapeError("vector length mismatch");
  std::vector<std::uint64_t> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = f.sub(a[i], b[i]);
  return out;
}

}  // namespace ciphernet::mpcore
