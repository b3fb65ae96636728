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

#include "ciphernet/protocol/transport.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>
#include <thread>

#include "ciphernet/error.hpp"

namespace ciphernet::protocol {

const char* to_string(MsgType t) {
  switch (t) {
    case MsgType::Hello: return "HELLO";
    case MsgType::Share: return "SHARE";
    case MsgType::LabelsReq: return "LABELS_REQ";
    case MsgType::Labels: return "LABELS";
    case MsgType::GcOut: return "GC_OUT";
    case MsgType::Done: return "DONE";
  }
  return "UNKNOWN";
}

namespace {

std::pair<std::string, std::string> split_address(const std::string& address) {
  const auto colon = address.rfind(':');
  if (colon == std::string::npos) throw ProtocolError("transport", "address '" + address + "' must be host:port");
  std::string host = address.substr(0, colon);
  if (host.empty()) host = "127.0.0.1";
  return {host, address.substr(colon + 1)};
}

void set_nodelay(int fd) {
  int one = 1;
  ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
}

}  // namespace

Channel::Channel(int fd) : fd_(fd) {}
Channel::~Channel() { close(); }
Channel::Channel(Channel&& o) noexcept : fd_(o.fd_), sent_(o.sent_), received_(o.received_) { o.fd_ = -1; }
Channel& Channel::operator=(Channel&& o) noexcept {
  if (this != &o) {
    close();
    fd_ = o.fd_;
    sent_ = o.sent_;
    received_ = o.received_;
    o.fd_ = -1;
  }
  return *this;
}

void Channel::close() {
  if (fd_ >= 0) ::close(fd_);
  fd_ = -1;
}

void Channel::write_all(const std::uint8_t* data, std::size_t n) {
  while (n > 0) {
    const ssize_t k = ::send(fd_, data, n, MSG_NOSIGNAL);
    if (k < 0) {
      if (errno == EINTR) continue;
      throw ProtocolError("transport", std::string("send failed: ") + std::strerror(errno));
    }
    data += k;
    n -= static_cast<std::size_t>(k);
  }
}

void Channel::read_all(std::uint8_t* data, std::size_t n) {
  while (n > 0) {
    const ssize_t k = ::recv(fd_, data, n, 0);
    if (k == 0) throw ProtocolError("transport", "peer closed the connection");
    if (k < 0) {
      if (errno == EINTR) continue;
      throw ProtocolError("transport", std::string("recv failed: ") + std::strerror(errno));
    }
    data += k;
    n -= static_cast<std::size_t>(k);
  }
}

void Channel::send(MsgType type, std::span<const std::uint8_t> payload) {
  if (fd_ < 0) throw ProtocolError("transport", "send on a closed channel");
  if (payload.size() + 1 > kMaxFrame) throw ProtocolError("transport", "frame too large");
  const auto len = static_cast<std::uint32_t>(payload.size() + 1);
  std::uint8_t head[5] = {static_cast<std::uint8_t>(len >> 24), static_cast<std::uint8_t>(len >> 16),
                          static_cast<std::uint8_t>(len >> 8), static_cast<std::uint8_t>(len),
                          static_cast<std::uint8_t>(type)};
  write_all(head, 5);
  if (!payload.empty()) write_all(payload.data(), payload.size());
  sent_ += 5 + payload.size();
}

Frame Channel::recv() {
  if (fd_ < 0) throw ProtocolError("transport", "recv on a closed channel");
  std::uint8_t head[5];
  read_all(head, 5);
  const std::uint32_t len = (std::uint32_t{head[0]} << 24) | (std::uint32_t{head[1]} << 16) |
                            (std::uint32_t{head[2]} << 8) | std::uint32_t{head[3]};
  if (len == 0 || len > kMaxFrame) throw ProtocolError("transport", "invalid frame length " + std::to_string(len));
  if (head[4] < 1 || head[4] > 6) throw DesyncError("unknown message type " + std::to_string(head[4]));
  Frame f;
  f.type = static_cast<MsgType>(head[4]);
  f.payload.resize(len - 1);
  if (!f.payload.empty()) read_all(f.payload.data(), f.payload.size());
  received_ += 4 + len;
  return f;
}

Frame Channel::expect(MsgType type) {
  Frame f = recv();
  if (f.type != type)
    throw DesyncError(std::string("expected ") + to_string(type) + " but received " + to_string(f.type));
  return f;
}

std::pair<Channel, Channel> Channel::socket_pair() {
  int fds[2];
  if (::socketpair(AF_UNIX, SOCK_STREAM, 0, fds) != 0)
    throw ProtocolError("transport", std::string("socketpair failed: ") + std::strerror(errno));
  return {Channel(fds[0]), Channel(fds[1])};
}

Channel Channel::connect(const std::string& address, int timeout_ms) {
  const auto [host, port] = split_address(address);
  const auto deadline = std::chrono::steady_clock::now() + std::chrono::milliseconds(timeout_ms);
  std::string last_error = "timeout";
  while (true) {
    addrinfo hints{};
    hints.ai_family = AF_INET;
    hints.ai_socktype = SOCK_STREAM;
    addrinfo* res = nullptr;
    const int rc = ::getaddrinfo(host.c_str(), port.c_str(), &hints, &res);
    if (rc != 0) throw ProtocolError("transport", "cannot resolve " + address + ": " + gai_strerror(rc));
    const int fd = ::socket(res->ai_family, res->ai_socktype, res->ai_protocol);
    if (fd >= 0 && ::connect(fd, res->ai_addr, res->ai_addrlen) == 0) {
      ::freeaddrinfo(res);
      set_nodelay(fd);
      return Channel(fd);
    }
    last_error = std::strerror(errno);
    if (fd >= 0) ::close(fd);
    ::freeaddrinfo(res);
    if (std::chrono::steady_clock::now() > deadline)
      throw ProtocolError("transport", "cannot connect to " + address + ": " + last_error);
    std::this_thread::sleep_for(std::chrono::milliseconds(50));
  }
}

Listener::Listener(const std::string& address) {
  const auto [host, port] = split_address(address);
  fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd_ < 0) throw ProtocolError("transport", std::string("socket failed: ") + std::strerror(errno));
  int one = 1;
  ::setsockopt(fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(static_cast<std::uint16_t>(std::stoi(port)));
  if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1)
    throw ProtocolError("transport", "listen address must be a dotted IPv4 address: " + host);
  if (::bind(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0 || ::listen(fd_, 1) != 0) {
    const std::string err = std::strerror(errno);
    ::close(fd_);
    throw ProtocolError("transport", "cannot listen on " + address + ": " + err);
  }
  socklen_t len = sizeof(addr);
  ::getsockname(fd_, reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = ntohs(addr.sin_port);
}

Listener::~Listener() {
  if (fd_ >= 0) ::close(fd_);
}

Channel Listener::accept() {
  while (true) {
    const int fd = ::accept(fd_, nullptr, nullptr);
    if (fd >= 0) {
      set_nodelay(fd);
      return Channel(fd);
    }
    if (errno != EINTR) throw ProtocolError("transport", std::string("accept failed: ") + std::strerror(errno));
  }
}

}  // namespace ciphernet::protocol
