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

#include "ciphernet/mpcore/sharing.hpp"

#include "ciphernet/error.hpp"

namespace ciphernet::mpcore {

std::vector<std::uint64_t> random_vector(const Field& field, std::size_t n, crypto::Prg& rng) {
  std::vector<std::uint64_t> out(n);
  for (auto& v : out) v = rng.uniform(field.modulus());
  return out;
}

std::pair<Share, Share> share(std::span<const std::uint64_t> secret, const Field& field, crypto::Prg& rng,
                              int scale_exp) {
  Share c{Party::Client, random_vector(field, secret.size(), rng), scale_exp, field.modulus()};
  Share s{Party::Server, std::vector<std::uint64_t>(secret.size()), scale_exp, field.modulus()};
  for (std::size_t i = 0; i < secret.size(); ++i) s.values[i] = field.sub(field.reduce(secret[i]), c.values[i]);
  return {std::move(c), std::move(s)};
}

std::vector<std::uint64_t> reconstruct(const Share& client, const Share& server) {
  if (client.modulus != server.modulus) throw ShapeError("modulus mismatch between shares");
  if (client.values.size() != server.values.size())
    throw ShapeError("share length mismatch: " + std::to_string(client.values.size()) + " vs " +
                     std::to_string(server.values.size()));
  if (client.party == server.party) throw ShapeError("reconstruct needs one client and one server share");
  const Field f(client.modulus);
  return add(f, client.values, server.values);
}

}  // namespace ciphernet::mpcore
