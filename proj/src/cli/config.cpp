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

#include "ciphernet/cli/config.hpp"

#include <cstdlib>
#include <cstring>

#include "ciphernet/crypto/prg.hpp"
#include "ciphernet/error.hpp"
#include "ciphernet/mpcore/field.hpp"
#include "ciphernet/netgraph/spec_io.hpp"
#include "json.hpp"

namespace ciphernet::cli {

using nlohmann::json;

int GlobalConfig::bit_width() const {
  int b = 0;
  for (std::uint64_t v = modulus; v; v >>= 1) ++b;
  return b;
}

mpcore::FxpConfig GlobalConfig::fxp() const {
  mpcore::FxpConfig c;
  c.frac_bits = frac_bits;
  c.modulus = modulus;
  c.max_scale_exponent = max_scale_exponent;
  return c;
}

void GlobalConfig::validate() const {
  if (modulus < 3 || modulus >= (1ull << 62) || !mpcore::is_prime(modulus))
    throw SpecError("modulus " + std::to_string(modulus) + " must be a prime in [3, 2^62)");
  if (frac_bits < 0 || 2 * frac_bits >= bit_width())
    throw SpecError("frac_bits " + std::to_string(frac_bits) + " must satisfy 2f < bit length of p (" +
                    std::to_string(bit_width()) + ")");
  fxp().validate();
}

GlobalConfig parse_config(std::string_view text) {
  GlobalConfig c;
  try {
    const json j = json::parse(text);
    if (!j.is_object()) throw SpecError("config must be a JSON object");
    for (const auto& [key, value] : j.items()) {
      if (key == "modulus") c.modulus = value.get<std::uint64_t>();
      else if (key == "frac_bits") c.frac_bits = value.get<int>();
      else if (key == "max_scale_exponent") c.max_scale_exponent = value.get<int>();
      else if (key == "seed") c.seed = value.get<std::uint64_t>();
      else if (key == "paths") c.paths = value.get<std::map<std::string, std::string>>();
      else throw SpecError("unknown config key '" + key + "'");
    }
  } catch (const json::exception& e) {
    throw SpecError(std::string("malformed config: ") + e.what());
  }
  c.validate();
  return c;
}

GlobalConfig load_config(const std::filesystem::path& path) { return parse_config(netgraph::read_text_file(path)); }

GlobalConfig resolve_config(const std::optional<std::filesystem::path>& explicit_path) {
  if (explicit_path) return load_config(*explicit_path);
  const char* env = std::getenv("CIPHERNET_CONFIG");
  if (env && std::strlen(env) > 0) return load_config(env);
  return GlobalConfig{};
}

std::uint64_t role_seed(std::uint64_t seed, std::string_view role) {
  return crypto::derive_seed(crypto::seed_block(seed), role).lo();
}

}  // namespace ciphernet::cli
