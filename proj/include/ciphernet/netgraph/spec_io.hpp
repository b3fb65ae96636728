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

#include <filesystem>
#include <string>
#include <string_view>

#include "ciphernet/netgraph/spec.hpp"

namespace ciphernet::netgraph {

/// Parses the JSON spec-file schema:
///   {"depth": D, "input": [H, H, C], "alpha": a,
///    "layers": [{"id", "kind", "filter", "out_channels", "stride", "inputs"}],
///    "skips": [[...], ...]}
/// Throws SpecError naming the offending node.
NetworkSpec parse_spec(std::string_view text);

/// Canonical serialization: sorted keys, nodes in id order, two-space indent.
/// Byte-identical for equal specs.
std::string to_json(const NetworkSpec& spec);

NetworkSpec load_spec(const std::filesystem::path& path);
void save_spec(const NetworkSpec& spec, const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace ciphernet::netgraph
