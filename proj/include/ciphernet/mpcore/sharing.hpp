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
#include <utility>
#include <vector>

#include "ciphernet/crypto/prg.hpp"
#include "ciphernet/mpcore/field.hpp"

namespace ciphernet::mpcore {

enum class Party { Client, Server };

/// One party's additive share of a vector: client + server = secret (mod p).
struct Share {
  Party party = Party::Client;
  std::vector<std::uint64_t> values;
  int scale_exp = 0;
  std::uint64_t modulus = 0;
};

/// Client share is the random blind r, server share is secret - r.
std::pair<Share, Share> share(std::span<const std::uint64_t> secret, const Field& field, crypto::Prg& rng,
                              int scale_exp = 0);
std::vector<std::uint64_t> reconstruct(const Share& client, const Share& server);

/// Uniform field vector.
std::vector<std::uint64_t> random_vector(const Field& field, std::size_t n, crypto::Prg& rng);

}  // namespace ciphernet::mpcore
