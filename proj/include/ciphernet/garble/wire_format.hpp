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
#include <vector>

#include "ciphernet/bytes.hpp"
#include "ciphernet/garble/garbler.hpp"
#include "ciphernet/garble/ot.hpp"

namespace ciphernet::garble {

/// Garbled tables: circuit hash (32) | u32 count | u32 and_count | rows,
/// 16 bytes each, copy-major then gate order then row index.
void write_tables(ByteWriter& w, const GarbledTables& t);
GarbledTables read_tables(ByteReader& r);

/// Garbler keys: delta (16) | u32 count | u32 n_in | u32 n_out | input
/// zero-labels | output zero-labels.
void write_keys(ByteWriter& w, const GarblerKeys& k);
GarblerKeys read_keys(ByteReader& r);

/// OT pads: u64 n | n * (m0, m1) for the sender; u64 n | n * (u8 c, m_c)
/// for the receiver.
void write_sender_pads(ByteWriter& w, std::span<const OtSenderPad> pads);
std::vector<OtSenderPad> read_sender_pads(ByteReader& r);
void write_receiver_pads(ByteWriter& w, std::span<const OtReceiverPad> pads);
std::vector<OtReceiverPad> read_receiver_pads(ByteReader& r);

}  // namespace ciphernet::garble
