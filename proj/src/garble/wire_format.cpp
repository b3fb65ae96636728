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

#include "ciphernet/garble/wire_format.hpp"

#include <algorithm>

namespace ciphernet::garble {

void write_tables(ByteWriter& w, const GarbledTables& t) {
  w.bytes(t.circuit_hash);
  w.u32(t.count);
  w.u32(t.and_count);
  w.blocks(t.rows);
}

GarbledTables read_tables(ByteReader& r) {
  GarbledTables t;
  auto h = r.bytes(32);
  std::copy(h.begin(), h.end(), t.circuit_hash.begin());
  t.count = r.u32();
  t.and_count = r.u32();
  t.rows = r.blocks(static_cast<std::size_t>(t.count) * t.and_count * 4);
  return t;
}

void write_keys(ByteWriter& w, const GarblerKeys& k) {
  w.block(k.delta);
  w.u32(k.count);
  const std::uint32_t n_in = k.count ? static_cast<std::uint32_t>(k.input_zero.size() / k.count) : 0;
  const std::uint32_t n_out = k.count ? static_cast<std::uint32_t>(k.output_zero.size() / k.count) : 0;
  w.u32(n_in);
  w.u32(n_out);
  w.blocks(k.input_zero);
  w.blocks(k.output_zero);
}

GarblerKeys read_keys(ByteReader& r) {
  GarblerKeys k;
  k.delta = r.block();
  k.count = r.u32();
  const std::uint32_t n_in = r.u32();
  const std::uint32_t n_out = r.u32();
  k.input_zero = r.blocks(static_cast<std::size_t>(k.count) * n_in);
  k.output_zero = r.blocks(static_cast<std::size_t>(k.count) * n_out);
  return k;
}

void write_sender_pads(ByteWriter& w, std::span<const OtSenderPad> pads) {
  w.u64(pads.size());
  for (const auto& p : pads) {
    w.block(p.m0);
    w.block(p.m1);
  }
}

std::vector<OtSenderPad> read_sender_pads(ByteReader& r) {
  const std::uint64_t n = r.u64();
  if (n > r.remaining() / 32) throw IoError("OT sender pads: count exceeds the payload");
  std::vector<OtSenderPad> pads(n);
  for (auto& p : pads) {
    p.m0 = r.block();
    p.m1 = r.block();
  }
  return pads;
}

void write_receiver_pads(ByteWriter& w, std::span<const OtReceiverPad> pads) {
  w.u64(pads.size());
  for (const auto& p : pads) {
    w.u8(p.c ? 1 : 0);
    w.block(p.mc);
  }
}

std::vector<OtReceiverPad> read_receiver_pads(ByteReader& r) {
  const std::uint64_t n = r.u64();
  if (n > r.remaining() / 17) throw IoError("OT receiver pads: count exceeds the payload");
  std::vector<OtReceiverPad> pads(n);
  for (auto& p : pads) {
    p.c = r.u8() != 0;
    p.mc = r.block();
  }
  return pads;
}

}  // namespace ciphernet::garble
