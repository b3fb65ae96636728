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

#include <gtest/gtest.h>

#include "ciphernet/bytes.hpp"
#include "ciphernet/crypto/prg.hpp"
#include "ciphernet/error.hpp"
#include "ciphernet/garble/circuit.hpp"
#include "ciphernet/garble/garbler.hpp"
#include "ciphernet/garble/ot.hpp"
#include "ciphernet/garble/relu_circuit.hpp"
#include "ciphernet/garble/wire_format.hpp"

using namespace ciphernet;
using namespace ciphernet::garble;

namespace {

// Share-level ReLU written from its definition, independent of the circuit code.
std::uint64_t relu_oracle(std::uint64_t qs, std::uint64_t qc, std::uint64_t r, std::uint64_t p, int shift) {
  const std::uint64_t t = (qs + qc) % p;
  const std::int64_t signed_t = t > p / 2 ? static_cast<std::int64_t>(t) - static_cast<std::int64_t>(p)
                                          : static_cast<std::int64_t>(t);
  const std::uint64_t z = signed_t > 0 ? static_cast<std::uint64_t>(signed_t) >> shift : 0;
  return (z + p - r) % p;
}

std::vector<Block> labels_for(const BooleanCircuit& c, const GarblerKeys& keys, std::uint32_t copy,
                              std::span<const std::uint8_t> bits) {
  std::vector<Block> out;
  for (std::uint32_t w = 0; w < c.num_inputs; ++w) out.push_back(input_label(c, keys, copy, w, bits[w]));
  return out;
}

}  // namespace

TEST(Circuit, AdderMatchesIntegerAdditionExhaustively) {
  CircuitBuilder b(8);
  std::vector<Wire> x, y;
  for (std::uint32_t i = 0; i < 4; ++i) x.push_back(b.input(i));
  for (std::uint32_t i = 4; i < 8; ++i) y.push_back(b.input(i));
  const auto sum = b.add(x, y);
  ASSERT_EQ(sum.size(), 5u);
  const auto c = b.finish(sum, {0, 1, 2, 3}, {4, 5, 6, 7});
  c.validate();
  EXPECT_EQ(c.and_count(), 4u);
  for (unsigned a = 0; a < 16; ++a)
    for (unsigned d = 0; d < 16; ++d) {
      std::vector<std::uint8_t> in(8);
      for (int i = 0; i < 4; ++i) {
        in[static_cast<std::size_t>(i)] = (a >> i) & 1;
        in[static_cast<std::size_t>(4 + i)] = (d >> i) & 1;
      }
      EXPECT_EQ(bits_to_word(c.evaluate(in)), a + d);
    }
}

TEST(Circuit, ConstantFoldingEmitsNoGates) {
  CircuitBuilder b(2);
  const Wire one = Wire::constant(true);
  const Wire x = b.input(0);
  EXPECT_EQ(b.AND(x, one).id, x.id);
  EXPECT_TRUE(b.AND(x, Wire::constant(false)).is_const());
  EXPECT_EQ(b.XOR(x, Wire::constant(false)).id, x.id);
  const auto c = b.finish(std::vector<Wire>{Wire::constant(true), Wire::constant(false)}, {0}, {1});
  EXPECT_EQ(c.and_count(), 0u);
  for (std::uint8_t v : {0, 1}) {
    const auto out = c.evaluate(std::vector<std::uint8_t>{v, 0});
    EXPECT_EQ(out, (std::vector<std::uint8_t>{1, 0}));
  }
}

class ReluSmall : public ::testing::TestWithParam<int> {};

TEST_P(ReluSmall, PlainCircuitExhaustiveP13) {
  const int shift = GetParam();
  const std::uint64_t p = 13;
  const auto c = build_relu_circuit(4, p, shift);
  for (std::uint64_t qs = 0; qs < p; ++qs)
    for (std::uint64_t qc = 0; qc < p; ++qc)
      for (std::uint64_t r = 0; r < p; ++r) {
        const auto want = relu_oracle(qs, qc, r, p, shift);
        ASSERT_EQ(relu_reference(qs, qc, r, p, shift), want);
        ASSERT_EQ(bits_to_word(c.evaluate(relu_input_bits(qs, qc, r, 4))), want)
            << qs << "," << qc << "," << r;
      }
}

TEST_P(ReluSmall, GarbledExhaustiveP13) {
  const int shift = GetParam();
  const std::uint64_t p = 13;
  const auto c = build_relu_circuit(4, p, shift);
  crypto::Prg rng(99 + static_cast<std::uint64_t>(shift));
  GarbledTables t;
  GarblerKeys k;
  garble_batch(c, static_cast<std::uint32_t>(p * p * p), rng, t, k);
  std::vector<Block> in;
  std::vector<std::uint64_t> want;
  std::uint32_t copy = 0;
  for (std::uint64_t qs = 0; qs < p; ++qs)
    for (std::uint64_t qc = 0; qc < p; ++qc)
      for (std::uint64_t r = 0; r < p; ++r, ++copy) {
        const auto bits = relu_input_bits(qs, qc, r, 4);
        const auto l = labels_for(c, k, copy, bits);
        in.insert(in.end(), l.begin(), l.end());
        want.push_back(relu_oracle(qs, qc, r, p, shift));
      }
  const auto out = decode_outputs(c, k, evaluate_batch(c, t, in));
  for (std::size_t e = 0; e < want.size(); ++e)
    ASSERT_EQ(bits_to_word(std::span(out).subspan(e * 4, 4)), want[e]);
}

INSTANTIATE_TEST_SUITE_P(Shifts, ReluSmall, ::testing::Values(0, 1, 2));

TEST(Relu, MidpointMapsToZero) {
  // t = 7 = (p+1)/2 for p = 13 is read as -6, so the ReLU outputs 0.
  EXPECT_EQ(relu_reference(7, 0, 0, 13, 0), 0u);
  EXPECT_EQ(relu_reference(6, 0, 0, 13, 0), 6u);
}

TEST(Relu, GarbledMatchesPlainOnWideWords) {
  const std::uint64_t p = (1ull << 31) - 1;
  const auto c = build_relu_circuit(31, p, 8);
  crypto::Prg rng(5), data(6);
  const std::uint32_t n = 2000;
  GarbledTables t;
  GarblerKeys k;
  garble_batch(c, n, rng, t, k);
  std::vector<Block> in;
  std::vector<std::uint64_t> want;
  for (std::uint32_t e = 0; e < n; ++e) {
    const std::uint64_t qs = data.uniform(p), qc = data.uniform(p), r = data.uniform(p);
    const auto bits = relu_input_bits(qs, qc, r, 31);
    const auto l = labels_for(c, k, e, bits);
    in.insert(in.end(), l.begin(), l.end());
    want.push_back(relu_oracle(qs, qc, r, p, 8));
  }
  const auto serial = evaluate_batch(c, t, in, kernels::Exec::Serial);
  EXPECT_EQ(serial, evaluate_batch(c, t, in, kernels::Exec::Parallel));
  const auto out = decode_outputs(c, k, serial);
  for (std::uint32_t e = 0; e < n; ++e) ASSERT_EQ(bits_to_word(std::span(out).subspan(e * 31u, 31)), want[e]);
}

TEST(Garble, DeterministicAcrossExecModes) {
  const auto c = build_relu_circuit(8, 251, 1);
  crypto::Prg a(3), b(3);
  GarbledTables ta, tb;
  GarblerKeys ka, kb;
  garble_batch(c, 64, a, ta, ka, kernels::Exec::Serial);
  garble_batch(c, 64, b, tb, kb, kernels::Exec::Parallel);
  EXPECT_EQ(ta.rows, tb.rows);
  EXPECT_EQ(ka.delta, kb.delta);
  EXPECT_TRUE(ka.delta.lsb());
}

TEST(Garble, TamperedOutputLabelFailsIntegrity) {
  const auto c = build_relu_circuit(8, 251, 0);
  crypto::Prg rng(4);
  const auto g = garble::garble(c, rng);
  const auto bits = relu_input_bits(10, 20, 5, 8);
  std::vector<Block> own, recv;
  for (auto w : c.evaluator_inputs) own.push_back(input_label(c, g.keys, 0, w, bits[w]));
  for (auto w : c.garbler_inputs) recv.push_back(input_label(c, g.keys, 0, w, bits[w]));
  auto out = evaluate(c, g.tables, own, recv);
  EXPECT_EQ(bits_to_word(decode_outputs(c, g.keys, out)), relu_oracle(10, 20, 5, 251, 0));
  out[3] = out[3] ^ Block(0, 4);
  EXPECT_THROW(decode_outputs(c, g.keys, out), ProtocolError);
}

TEST(Garble, CircuitHashIdentifiesShape) {
  const auto a = build_relu_circuit(31, (1ull << 31) - 1, 8);
  const auto b = build_relu_circuit(31, (1ull << 31) - 1, 8);
  const auto c = build_relu_circuit(31, (1ull << 31) - 1, 9);
  EXPECT_EQ(a.hash(), b.hash());
  EXPECT_NE(a.hash(), c.hash());
  EXPECT_EQ(gate_tweak(3, 5), (3ull << 20) | 5u);
}

TEST(Ot, DeliversChosenLabelsOnce) {
  crypto::Prg rng(8);
  auto [sp, rp] = deal_ot(64, rng);
  OtSender s(std::move(sp));
  OtReceiver r(std::move(rp));
  const Block delta(0x1234, 0x5679);
  std::vector<Block> zero(64);
  std::vector<std::uint8_t> bits(64);
  for (std::size_t i = 0; i < 64; ++i) {
    zero[i] = rng.next_block();
    bits[i] = rng.next_bit();
  }
  const auto got = deliver_labels(bits, zero, delta, s, r, 0);
  for (std::size_t i = 0; i < 64; ++i) EXPECT_EQ(got[i], bits[i] ? zero[i] ^ delta : zero[i]);
  EXPECT_EQ(s.remaining(), 0u);
  EXPECT_THROW(s.respond(0, false, zero[0], zero[0] ^ delta), ExhaustedError);
  EXPECT_THROW(r.mask(0, true), ExhaustedError);
}

TEST(Ot, UnchosenLabelStaysMasked) {
  crypto::Prg rng(9);
  auto [sp, rp] = deal_ot(1, rng);
  OtSender s(sp);
  OtReceiver r(rp);
  const Block x0(1, 2), x1(3, 4);
  const bool e = r.mask(0, true);
  const auto [y0, y1] = s.respond(0, e, x0, x1);
  EXPECT_EQ(r.recover(0, true, y0, y1), x1);
  // The pair element the receiver does not select is not x0 in the clear.
  EXPECT_NE(y0, x0);
  EXPECT_NE(y1, x0);
}

TEST(WireFormat, RoundTrips) {
  const auto c = build_relu_circuit(8, 251, 1);
  crypto::Prg rng(10);
  GarbledTables t;
  GarblerKeys k;
  garble_batch(c, 3, rng, t, k);
  auto [sp, rp] = deal_ot(5, rng);
  ByteWriter w;
  write_tables(w, t);
  write_keys(w, k);
  write_sender_pads(w, sp);
  write_receiver_pads(w, rp);
  const auto bytes = w.take();
  ByteReader r(bytes, "test");
  const auto t2 = read_tables(r);
  const auto k2 = read_keys(r);
  const auto sp2 = read_sender_pads(r);
  const auto rp2 = read_receiver_pads(r);
  r.expect_end();
  EXPECT_EQ(t2.rows, t.rows);
  EXPECT_EQ(t2.circuit_hash, t.circuit_hash);
  EXPECT_EQ(k2.delta, k.delta);
  EXPECT_EQ(k2.input_zero, k.input_zero);
  ASSERT_EQ(sp2.size(), 5u);
  EXPECT_EQ(sp2[4].m1, sp[4].m1);
  EXPECT_EQ(rp2[2].c, rp[2].c);
  // Truncated input is an I/O error, not a crash.
  ByteReader shortr(std::span<const std::uint8_t>(bytes).first(20), "short");
  EXPECT_THROW(read_tables(shortr), IoError);
}
