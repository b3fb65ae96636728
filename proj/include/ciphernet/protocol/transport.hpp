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
#include <string>
#include <utility>
#include <vector>

namespace ciphernet::protocol {

enum class MsgType : std::uint8_t { Hello = 1, Share = 2, LabelsReq = 3, Labels = 4, GcOut = 5, Done = 6 };

const char* to_string(MsgType t);

struct Frame {
  MsgType type = MsgType::Hello;
  std::vector<std::uint8_t> payload;
};

/// Largest accepted frame body (type byte + payload).
inline constexpr std::uint32_t kMaxFrame = 1u << 30;

/// Framed stream connection: u32 big-endian length of (type + payload),
/// one type byte, payload. Byte counters include the 5 header bytes.
class Channel {
 public:
  explicit Channel(int fd);
  ~Channel();
  Channel(Channel&& o) noexcept;
  Channel& operator=(Channel&& o) noexcept;
  Channel(const Channel&) = delete;
  Channel& operator=(const Channel&) = delete;

  void send(MsgType type, std::span<const std::uint8_t> payload);
  Frame recv();
  /// Receives and throws DesyncError unless the frame has type `type`.
  Frame expect(MsgType type);

  std::uint64_t bytes_sent() const { return sent_; }
  std::uint64_t bytes_received() const { return received_; }
  void close();

  static std::pair<Channel, Channel> socket_pair();
  /// Connects to "host:port", retrying for up to `timeout_ms`.
  static Channel connect(const std::string& address, int timeout_ms = 10000);

 private:
  void write_all(const std::uint8_t* data, std::size_t n);
  void read_all(std::uint8_t* data, std::size_t n);

  int fd_ = -1;
  std::uint64_t sent_ = 0;
  std::uint64_t received_ = 0;
};

/// TCP listener bound to "host:port" (port 0 picks a free port).
class Listener {
 public:
  explicit Listener(const std::string& address);
  ~Listener();
  Listener(const Listener&) = delete;
  Listener& operator=(const Listener&) = delete;

  Channel accept();
  int port() const { return port_; }

 private:
  int fd_ = -1;
  int port_ = 0;
};

}  // namespace ciphernet::protocol
