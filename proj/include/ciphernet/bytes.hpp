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
#include <cstring>
#include <span>
#include <string>
#include <vector>

#include "ciphernet/crypto/block.hpp"
#include "ciphernet/error.hpp"

namespace ciphernet {

/// Little-endian append-only byte buffer.
class ByteWriter {
 public:
  void u8(std::uint8_t v) { buf_.push_back(v); }
  void u32(std::uint32_t v) { put(v, 4); }
  void i32(std::int32_t v) { put(static_cast<std::uint32_t>(v), 4); }
  void u64(std::uint64_t v) { put(v, 8); }
  void bytes(std::span<const std::uint8_t> b) { buf_.insert(buf_.end(), b.begin(), b.end()); }
  void block(const crypto::Block& b) {
    const std::size_t o = buf_.size();
    buf_.resize(o + 16);
    b.store(buf_.data() + o);
  }
  void blocks(std::span<const crypto::Block> bs) {
    const std::size_t o = buf_.size();
    buf_.resize(o + 16 * bs.size());
    for (std::size_t i = 0; i < bs.size(); ++i) bs[i].store(buf_.data() + o + 16 * i);
  }
  void u64s(std::span<const std::uint64_t> vs) {
    const std::size_t o = buf_.size();
    buf_.resize(o + 8 * vs.size());
    for (std::size_t i = 0; i < vs.size(); ++i)
      for (int k = 0; k < 8; ++k) buf_[o + 8 * i + k] = static_cast<std::uint8_t>(vs[i] >> (8 * k));
  }

  std::vector<std::uint8_t>& data() { return buf_; }
  std::vector<std::uint8_t> take() { return std::move(buf_); }
  std::size_t size() const { return buf_.size(); }

 private:
  void put(std::uint64_t v, int n) {
    for (int i = 0; i < n; ++i) buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  std::vector<std::uint8_t> buf_;
};

/// Bounds-checked little-endian reader; `context` names the structure in
/// error messages.
class ByteReader {
 public:
  ByteReader(std::span<const std::uint8_t> data, std::string context) : data_(data), context_(std::move(context)) {}

  std::uint8_t u8() { return static_cast<std::uint8_t>(get(1)); }
  std::uint32_t u32() { return static_cast<std::uint32_t>(get(4)); }
  std::int32_t i32() { return static_cast<std::int32_t>(static_cast<std::uint32_t>(get(4))); }
  std::uint64_t u64() { return get(8); }
  std::span<const std::uint8_t> bytes(std::size_t n) {
    need(n);
    auto s = data_.subspan(pos_, n);
    pos_ += n;
    return s;
  }
  crypto::Block block() { return crypto::Block::load(bytes(16).data()); }
  std::vector<crypto::Block> blocks(std::size_t n) {
    need(16 * n);
    std::vector<crypto::Block> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = crypto::Block::load(data_.data() + pos_ + 16 * i);
    pos_ += 16 * n;
    return out;
  }
  std::vector<std::uint64_t> u64s(std::size_t n) {
    need(8 * n);
    std::vector<std::uint64_t> out(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::uint64_t v = 0;
      for (int k = 0; k < 8; ++k) v |= static_cast<std::uint64_t>(data_[pos_ + 8 * i + k]) << (8 * k);
      out[i] = v;
    }
    pos_ += 8 * n;
    return out;
  }

  std::size_t remaining() const { return data_.size() - pos_; }
  void expect_end() const {
    if (remaining() != 0) throw IoError(context_ + ": " + std::to_string(remaining()) + " trailing bytes");
  }

 private:
  void need(std::size_t n) const {
    if (n > remaining()) throw IoError(context_ + ": truncated (" + std::to_string(n) + " bytes needed, " +
                                       std::to_string(remaining()) + " left)");
  }
  std::uint64_t get(int n) {
    need(static_cast<std::size_t>(n));
    std::uint64_t v = 0;
    for (int i = 0; i < n; ++i) v |= static_cast<std::uint64_t>(data_[pos_ + i]) << (8 * i);
    pos_ += static_cast<std::size_t>(n);
    return v;
  }

  std::span<const std::uint8_t> data_;
  std::string context_;
  std::size_t pos_ = 0;
};

}  // namespace ciphernet
