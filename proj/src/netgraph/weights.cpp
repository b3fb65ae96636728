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

#include "ciphernet/netgraph/weights.hpp"

#include <cmath>
#include <cstring>
#include <fstream>

#include "ciphernet/crypto/prg.hpp"
#include "ciphernet/error.hpp"

namespace ciphernet::netgraph {

std::size_t kernel_size(const NetworkSpec& spec, const LayerNode& node) {
  const auto cin = static_cast<std::size_t>(spec.input_channels(node.id));
  const auto cout = static_cast<std::size_t>(node.out_channels);
  switch (node.kind) {
    case LayerKind::Conv: return cout * static_cast<std::size_t>(node.filter * node.filter) * cin;
    case LayerKind::ConcatReshape: return cout * cin;
    case LayerKind::Dense: return cout * spec.shape_of(node.inputs.front()).elements();
    default: return 0;
  }
}

void check_weights(const NetworkSpec& spec, const Weights& weights) {
  for (const auto& n : spec.nodes()) {
    if (!n.has_weights()) continue;
    auto it = weights.find(n.id);
    if (it == weights.end()) throw ShapeError("missing weights for layer " + std::to_string(n.id));
    if (it->second.kernel.size() != kernel_size(spec, n))
      throw ShapeError("layer " + std::to_string(n.id) + ": kernel has " + std::to_string(it->second.kernel.size()) +
                       " values, expected " + std::to_string(kernel_size(spec, n)));
    if (it->second.bias.size() != static_cast<std::size_t>(n.out_channels))
      throw ShapeError("layer " + std::to_string(n.id) + ": bias has " + std::to_string(it->second.bias.size()) +
                       " values, expected " + std::to_string(n.out_channels));
  }
}

Weights random_weights(const NetworkSpec& spec, std::uint64_t seed, WeightInit init, int frac_bits) {
  crypto::Prg prg(crypto::derive_seed(crypto::seed_block(seed), "weights"));
  Weights w;
  const double grid = std::ldexp(1.0, -frac_bits);
  for (const auto& n : spec.nodes()) {
    if (!n.has_weights()) continue;
    LayerWeights lw;
    const std::size_t size = kernel_size(spec, n);
    const std::size_t rows = static_cast<std::size_t>(n.out_channels);
    const std::size_t fan_in = size / rows;
    lw.kernel.resize(size);
    lw.bias.resize(rows);
    if (init == WeightInit::Scaled) {
      const double a = std::sqrt(3.0 / static_cast<double>(fan_in));
      for (auto& v : lw.kernel) v = static_cast<float>(prg.uniform_real(-a, a));
      for (auto& v : lw.bias) v = static_cast<float>(prg.uniform_real(-0.1, 0.1));
    } else {
      // Integer numerators bounded so that sum |w| <= 1/2 per row.
      const auto max_num = static_cast<std::int64_t>(std::floor(std::ldexp(0.5, frac_bits) / static_cast<double>(fan_in)));
      const std::int64_t bound = std::max<std::int64_t>(max_num, 0);
      for (auto& v : lw.kernel) {
        const auto k = static_cast<std::int64_t>(prg.uniform(static_cast<std::uint64_t>(2 * bound + 1))) - bound;
        v = static_cast<float>(static_cast<double>(k) * grid);
      }
      const auto bias_bound = static_cast<std::int64_t>(std::ldexp(1.0, frac_bits) / 16);
      for (auto& v : lw.bias) {
        const auto k = static_cast<std::int64_t>(prg.uniform(static_cast<std::uint64_t>(2 * bias_bound + 1))) - bias_bound;
        v = static_cast<float>(static_cast<double>(k) * grid);
      }
    }
    w.emplace(n.id, std::move(lw));
  }
  return w;
}

namespace {

template <typename T>
void put(std::ofstream& f, T v) {
  unsigned char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));  // host is little-endian (x86-64)
  f.write(reinterpret_cast<const char*>(buf), sizeof(T));
}

template <typename T>
T get(std::ifstream& f, const std::string& what) {
  T v{};
  f.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!f) throw IoError("truncated weights file while reading " + what);
  return v;
}

}  // namespace

void save_weights(const Weights& weights, const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot write " + path.string());
  f.write("CNW1", 4);
  put<std::uint32_t>(f, static_cast<std::uint32_t>(weights.size()));
  for (const auto& [id, lw] : weights) {
    put<std::int32_t>(f, id);
    put<std::uint64_t>(f, lw.kernel.size() + lw.bias.size());
  }
  for (const auto& [id, lw] : weights) {
    for (float v : lw.kernel) put<float>(f, v);
    for (float v : lw.bias) put<float>(f, v);
  }
  if (!f) throw IoError("short write to " + path.string());
}

Weights load_weights(const std::filesystem::path& path, const NetworkSpec& spec) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path.string());
  char magic[4];
  f.read(magic, 4);
  if (!f || std::memcmp(magic, "CNW1", 4) != 0) throw IoError(path.string() + ": not a CNW1 weights file");
  const auto count = get<std::uint32_t>(f, "layer count");
  std::vector<std::pair<int, std::uint64_t>> header;
  for (std::uint32_t i = 0; i < count; ++i) {
    const auto id = get<std::int32_t>(f, "layer id");
    const auto n = get<std::uint64_t>(f, "element count");
    header.emplace_back(id, n);
  }
  Weights w;
  for (const auto& [id, n] : header) {
    if (!spec.contains(id) || !spec.node(id).has_weights())
      throw ShapeError("weights file has layer " + std::to_string(id) + " which the network spec does not parameterize");
    const auto& node = spec.node(id);
    const std::size_t ks = kernel_size(spec, node);
    if (n != ks + static_cast<std::size_t>(node.out_channels))
      throw ShapeError("layer " + std::to_string(id) + ": weights file holds " + std::to_string(n) + " values, expected " +
                       std::to_string(ks + static_cast<std::size_t>(node.out_channels)));
    LayerWeights lw;
    lw.kernel.resize(ks);
    lw.bias.resize(static_cast<std::size_t>(node.out_channels));
    for (auto& v : lw.kernel) v = get<float>(f, "kernel");
    for (auto& v : lw.bias) v = get<float>(f, "bias");
    w.emplace(id, std::move(lw));
  }
  check_weights(spec, w);
  return w;
}

}  // namespace ciphernet::netgraph
