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
#include <map>
#include <optional>
#include <string>

#include "ciphernet/mpcore/fixed_point.hpp"

namespace ciphernet::cli {

/// Settings shared by every subcommand. Precedence: defaults, then the
/// JSON file named by --config or CIPHERNET_CONFIG, then explicit flags.
///
///   {"modulus": 2147483647, "frac_bits": 8, "max_scale_exponent": 28,
///    "seed": 1, "paths": {"name": "path", ...}}
struct GlobalConfig {
  std::uint64_t modulus = (1ull << 31) - 1;
  int frac_bits = 8;
  int max_scale_exponent = 28;
  std::uint64_t seed = 1;
  std::map<std::string, std::string> paths;

  /// Bit length of the modulus.
  int bit_width() const;
  mpcore::FxpConfig fxp() const;
  /// Throws SpecError unless p is prime below 2^62 and f < bit_width / 2.
  void validate() const;
};

GlobalConfig parse_config(std::string_view json_text);
GlobalConfig load_config(const std::filesystem::path& path);

/// Defaults overlaid with `explicit_path`, or CIPHERNET_CONFIG when empty.
GlobalConfig resolve_config(const std::optional<std::filesystem::path>& explicit_path);

/// Independent seed for one role ("dealer", "weights", "input", ...).
std::uint64_t role_seed(std::uint64_t seed, std::string_view role);

}  // namespace ciphernet::cli
