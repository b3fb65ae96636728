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

#include "ciphernet/garble/ot.hpp"

#include "ciphernet/error.hpp"

namespace ciphernet::garble {

std::pair<std::vector<OtSenderPad>, std::vector<OtReceiverPad>> deal_ot(std::size_t n, crypto::Prg& rng) {
  std::vector<OtSenderPad> s(n);
  std::vector<OtReceiverPad> r(n);
  for (std::size_t i = 0; i < n; ++i) {
    s[i].m0 = rng.next_block();
    s[i].m1 = rng.next_block();
    r[i].c = rng.next_bit();
    r[i].mc = r[i].c ? s[i].m1 : s[i].m0;
  }
  return {std::move(s), std::move(r)};
}

OtSender::OtSender(std::vector<OtSenderPad> pads)
    : pads_(std::move(pads)), used_(pads_.size(), 0), remaining_(pads_.size()) {}

std::pair<Block, Block> OtSender::respond(std::size_t id, bool e, const Block& x0, const Block& x1) {
  if (id >= pads_.size())
    throw ExhaustedError("OT correlation " + std::to_string(id) + " requested but only " + std::to_string(pads_.size()) +
                         " were dealt");
  if (used_[id]) throw ExhaustedError("OT correlation " + std::to_string(id) + " reused");
  used_[id] = 1;
  --remaining_;
  const OtSenderPad& p = pads_[id];
  const Block& me = e ? p.m1 : p.m0;
  const Block& mne = e ? p.m0 : p.m1;
  return {x0 ^ me, x1 ^ mne};
}

OtReceiver::OtReceiver(std::vector<OtReceiverPad> pads) : pads_(std::move(pads)), used_(pads_.size(), 0) {}

bool OtReceiver::mask(std::size_t id, bool b) {
  if (id >= pads_.size())
    throw ExhaustedError("OT correlation " + std::to_string(id) + " requested but only " + std::to_string(pads_.size()) +
                         " were dealt");
  if (used_[id]) throw ExhaustedError("OT correlation " + std::to_string(id) + " reused");
  used_[id] = 1;
  return b != pads_[id].c;
}

Block OtReceiver::recover(std::size_t id, bool b, const Block& y0, const Block& y1) const {
  if (id >= pads_.size()) throw ExhaustedError("OT correlation " + std::to_string(id) + " out of range");
  return (b ? y1 : y0) ^ pads_[id].mc;
}

std::vector<Block> deliver_labels(std::span<const std::uint8_t> bits, std::span<const Block> zero_labels,
                                  const Block& delta, OtSender& sender, OtReceiver& receiver, std::size_t first_id) {
  if (bits.size() != zero_labels.size()) throw ShapeError("one zero-label per delivered bit is required");
  std::vector<Block> out(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    const bool b = bits[i] & 1u;
    const bool e = receiver.mask(first_id + i, b);
    const auto [y0, y1] = sender.respond(first_id + i, e, zero_labels[i], zero_labels[i] ^ delta);
    out[i] = receiver.recover(first_id + i, b, y0, y1);
  }
  return out;
}

}  // namespace ciphernet::garble
