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

#include "ciphernet/protocol/transcript.hpp"

#include <cstdio>

#include "ciphernet/netgraph/spec_io.hpp"

namespace ciphernet::protocol {

const char* to_string(Phase p) {
  switch (p) {
    case Phase::Handshake: return "handshake";
    case Phase::Linear: return "linear";
    case Phase::Concat: return "concat";
    case Phase::Relu: return "relu";
    case Phase::Output: return "output";
  }
  return "?";
}

double Transcript::total_ms() const {
  double s = 0;
  for (const auto& r : rows) s += r.ms;
  return s;
}

std::uint64_t Transcript::total_bytes_out() const {
  std::uint64_t s = 0;
  for (const auto& r : rows) s += r.bytes_out;
  return s;
}

std::uint64_t Transcript::total_bytes_in() const {
  std::uint64_t s = 0;
  for (const auto& r : rows) s += r.bytes_in;
  return s;
}

int Transcript::layer_rounds() const {
  int s = 0;
  for (const auto& r : rows)
    if (r.layer >= 0) s += r.rounds;
  return s;
}

int Transcript::count(Phase p) const {
  int n = 0;
  for (const auto& r : rows) n += r.phase == p;
  return n;
}

std::string Transcript::to_csv() const {
  std::string out = "layer,phase,ms,bytes_out,bytes_in,rounds\n";
  char buf[160];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf), "%d,%s,%.3f,%llu,%llu,%d\n", r.layer, to_string(r.phase), r.ms,
                  static_cast<unsigned long long>(r.bytes_out), static_cast<unsigned long long>(r.bytes_in), r.rounds);
    out += buf;
  }
  return out;
}

void Transcript::write_csv(const std::filesystem::path& path) const { netgraph::write_text_file(path, to_csv()); }

}  // namespace ciphernet::protocol
