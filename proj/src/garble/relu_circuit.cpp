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

#include "ciphernet/garble/relu_circuit.hpp"

#include <numeric>
#include <string>

#include "ciphernet/error.hpp"

namespace ciphernet::garble {

BooleanCircuit build_relu_circuit(int bit_width, std::uint64_t p, int shift) {
  const auto l = static_cast<std::size_t>(bit_width);
  if (bit_width < 2 || bit_width > 62) throw SpecError("bit width must lie in [2, 62]");
  if (p < 3 || (p >> l) != 0) throw SpecError("modulus " + std::to_string(p) + " needs p < 2^" + std::to_string(l));
  if (shift < 0 || static_cast<std::size_t>(shift) >= l) throw SpecError("shift must lie in [0, bit width)");

  CircuitBuilder b(static_cast<std::uint32_t>(3 * l));
  std::vector<Wire> qs, qc, r;
  for (std::size_t i = 0; i < l; ++i) {
    qs.push_back(b.input(static_cast<std::uint32_t>(i)));
    qc.push_back(b.input(static_cast<std::uint32_t>(l + i)));
    r.push_back(b.input(static_cast<std::uint32_t>(2 * l + i)));
  }

  // (l+1)-bit sum, then d = sum - p via sum + (2^(l+1) - p); the carry out
  // of that addition is set exactly when sum >= p.
  std::vector<Wire> sum = b.add(qs, qc);
  const std::uint64_t neg_p = (std::uint64_t{1} << (l + 1)) - p;
  std::vector<Wire> d = b.add(sum, b.constant_word(neg_p, l + 1));
  const Wire ge = d[l + 1];
  std::vector<Wire> t(l);
  for (std::size_t i = 0; i < l; ++i) t[i] = b.MUX(ge, sum[i], d[i]);

  // Sign: t >= (p+1)/2, read off the carry of t + (2^l - (p+1)/2).
  const std::uint64_t half = (p + 1) / 2;
  std::vector<Wire> cmp = b.add(t, b.constant_word((std::uint64_t{1} << l) - half, l));
  const Wire neg = cmp[l];
  const Wire keep = b.NOT(neg);

  std::vector<Wire> z(l, Wire::constant(false));
  for (std::size_t i = static_cast<std::size_t>(shift); i < l; ++i) z[i - shift] = b.AND(t[i], keep);

  // z - r as z + ~r + 1 over l bits; a missing carry means it went negative.
  std::vector<Wire> not_r(l);
  for (std::size_t i = 0; i < l; ++i) not_r[i] = b.NOT(r[i]);
  std::vector<Wire> diff = b.add(z, not_r, Wire::constant(true));
  const Wire borrow = b.NOT(diff[l]);
  diff.resize(l);
  std::vector<Wire> fix(l);
  for (std::size_t i = 0; i < l; ++i) fix[i] = ((p >> i) & 1u) ? borrow : Wire::constant(false);
  std::vector<Wire> out = b.add(diff, fix);
  out.resize(l);

  std::vector<std::uint32_t> garbler(l), evaluator(2 * l);
  std::iota(garbler.begin(), garbler.end(), 0u);
  std::iota(evaluator.begin(), evaluator.end(), static_cast<std::uint32_t>(l));
  return b.finish(out, std::move(garbler), std::move(evaluator));
}

std::uint64_t relu_reference(std::uint64_t q_server, std::uint64_t q_client, std::uint64_t r, std::uint64_t p,
                             int shift) {
  const std::uint64_t t = (q_server + q_client) % p;
  const std::uint64_t z = t >= (p + 1) / 2 ? 0 : t;
  const std::uint64_t zs = z >> shift;
  return (zs + p - (r % p)) % p;
}

std::vector<std::uint8_t> relu_input_bits(std::uint64_t q_server, std::uint64_t q_client, std::uint64_t r,
                                          int bit_width) {
  const auto l = static_cast<std::size_t>(bit_width);
  std::vector<std::uint8_t> bits(3 * l);
  for (std::size_t i = 0; i < l; ++i) {
    bits[i] = (q_server >> i) & 1u;
    bits[l + i] = (q_client >> i) & 1u;
    bits[2 * l + i] = (r >> i) & 1u;
  }
  return bits;
}

std::uint64_t bits_to_word(std::span<const std::uint8_t> bits) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < bits.size() && i < 64; ++i) v |= static_cast<std::uint64_t>(bits[i] & 1u) << i;
  return v;
}

}  // namespace ciphernet::garble
