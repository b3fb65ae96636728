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
#include <filesystem>
#include <string>
#include <vector>

namespace ciphernet::protocol {

enum class Phase { Handshake, Linear, Concat, Relu, Output };

const char* to_string(Phase p);

/// One row per protocol step as seen by one party. Handshake and Output
/// rows carry layer -1.
struct TranscriptRow {
  int layer = -1;
  Phase phase = Phase::Linear;
  double ms = 0.0;
  std::uint64_t bytes_out = 0;
  std::uint64_t bytes_in = 0;
  int rounds = 0;
};

struct Transcript {
  std::vector<TranscriptRow> rows;

  double total_ms() const;
  std::uint64_t total_bytes_out() const;
  std::uint64_t total_bytes_in() const;
  /// Rounds over layer rows (handshake and output excluded).
  int layer_rounds() const;
  int count(Phase p) const;

  /// CSV with header "layer,phase,ms,bytes_out,bytes_in,rounds".
  std::string to_csv() const;
  void write_csv(const std::filesystem::path& path) const;
};

}  // namespace ciphernet::protocol
