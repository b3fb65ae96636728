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
#include <span>
#include <vector>

#include "ciphernet/bytes.hpp"
#include "ciphernet/protocol/offline.hpp"

namespace ciphernet::protocol {

/// One CNT1 record: "CNT1" | u64 modulus | i32 layer id | u64 count |
/// count little-endian u64 field elements.
struct CntRecord {
  std::uint64_t modulus = 0;
  int layer_id = 0;
  std::vector<std::uint64_t> values;
};

void write_cnt(ByteWriter& w, const CntRecord& rec);
CntRecord read_cnt(ByteReader& r);

/// Writes manifest.json plus client/ and server/ subdirectories under `dir`
/// (see docs/wire.md for the file list).
void save_bundles(const std::filesystem::path& dir, const CompiledNet& net, const ClientBundle& client,
                  const ServerBundle& server);
ClientBundle load_client_bundle(const std::filesystem::path& dir);
ServerBundle load_server_bundle(const std::filesystem::path& dir);

std::vector<std::uint8_t> read_binary_file(const std::filesystem::path& path);
void write_binary_file(const std::filesystem::path& path, std::span<const std::uint8_t> data);

}  // namespace ciphernet::protocol
