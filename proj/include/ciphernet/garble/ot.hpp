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
#include <utility>
#include <vector>

#include "ciphernet/crypto/block.hpp"
#include "ciphernet/crypto/prg.hpp"

namespace ciphernet::garble {

using crypto::Block;

/// Dealer-issued random-OT correlation: the sender holds (m0, m1), the
/// receiver holds a random choice c and m_c.
struct OtSenderPad {
  Block m0, m1;
};
struct OtReceiverPad {
  bool c = false;
  Block mc;
};

std::pair<std::vector<OtSenderPad>, std::vector<OtReceiverPad>> deal_ot(std::size_t n, crypto::Prg& rng);

/// Sender side. Each correlation id answers exactly one request.
class OtSender {
 public:
  explicit OtSender(std::vector<OtSenderPad> pads);

  /// Given the receiver's masked choice e = b xor c, returns
  /// (x0 xor m_e, x1 xor m_{1 xor e}).
  std::pair<Block, Block> respond(std::size_t id, bool e, const Block& x0, const Block& x1);
  std::size_t size() const { return pads_.size(); }
  std::size_t remaining() const { return remaining_; }

 private:
  std::vector<OtSenderPad> pads_;
  std::vector<std::uint8_t> used_;
  std::size_t remaining_;
};

/// Receiver side.
class OtReceiver {
 public:
  explicit OtReceiver(std::vector<OtReceiverPad> pads);

  /// Masked choice bit for correlation `id`; marks it consumed.
  bool mask(std::size_t id, bool b);
  /// Recovers x_b from the sender's pair.
  Block recover(std::size_t id, bool b, const Block& y0, const Block& y1) const;
  std::size_t size() const { return pads_.size(); }

 private:
  std::vector<OtReceiverPad> pads_;
  std::vector<std::uint8_t> used_;
};

/// Runs label delivery for a run of evaluator input bits against pairs of
/// garbler labels, consuming correlations [first_id, first_id + bits.size()).
std::vector<Block> deliver_labels(std::span<const std::uint8_t> bits, std::span<const Block> zero_labels,
                                  const Block& delta, OtSender& sender, OtReceiver& receiver, std::size_t first_id);

}  // namespace ciphernet::garble
