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

#include "ciphernet/planner/skip_plan.hpp"

#include <algorithm>
#include "json.hpp"

#include "ciphernet/crypto/prg.hpp"
#include "ciphernet/error.hpp"
#include "ciphernet/netgraph/spec_io.hpp"

namespace ciphernet::planner {

using nlohmann::json;

void SkipPlan::validate() const {
  if (depth < 0) throw SpecError("skip plan depth must be non-negative");
  if (!filters.empty() && static_cast<int>(filters.size()) != depth)
    throw SpecError("skip plan lists " + std::to_string(filters.size()) + " filters for depth " + std::to_string(depth));
  for (int f : filters)
    if (f != 3 && f != 5) throw SpecError("skip plan filter " + std::to_string(f) + " is not 3 or 5");
  if (!skips.empty() && static_cast<int>(skips.size()) != depth)
    throw SpecError("skip plan lists " + std::to_string(skips.size()) + " skip sets for depth " + std::to_string(depth));
  for (std::size_t i = 0; i < skips.size(); ++i) {
    const auto& s = skips[i];
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (s[j] < 0 || s[j] >= static_cast<int>(i))
        throw SpecError("skip set of layer " + std::to_string(i) + " references layer " + std::to_string(s[j]));
      if (j > 0 && s[j] <= s[j - 1])
        throw SpecError("skip set of layer " + std::to_string(i) + " must be sorted without duplicates");
    }
  }
}

bool SkipPlan::empty() const {
  return std::all_of(skips.begin(), skips.end(), [](const auto& s) { return s.empty(); });
}

std::string to_json(const SkipPlan& plan) {
  json j;
  j["depth"] = plan.depth;
  j["filters"] = plan.filters;
  j["skips"] = plan.skips;
  return j.dump(2) + "\n";
}

SkipPlan parse_skip_plan(std::string_view text) {
  SkipPlan p;
  try {
    const json j = json::parse(text);
    p.depth = j.at("depth").get<int>();
    if (j.contains("filters")) p.filters = j.at("filters").get<std::vector<int>>();
    if (j.contains("skips")) p.skips = j.at("skips").get<std::vector<std::vector<int>>>();
  } catch (const json::exception& e) {
    throw SpecError(std::string("malformed skip plan: ") + e.what());
  }
  p.validate();
  return p;
}

SkipPlan load_skip_plan(const std::filesystem::path& path) {
  return parse_skip_plan(netgraph::read_text_file(path));
}

void save_skip_plan(const SkipPlan& plan, const std::filesystem::path& path) {
  netgraph::write_text_file(path, to_json(plan));
}

SkipSearchOracle SkipSearchOracle::all_skip() { return {}; }

SkipSearchOracle SkipSearchOracle::random_sample(int k, std::uint64_t seed) {
  if (k < 0) throw SpecError("random oracle needs k >= 0");
  SkipSearchOracle o;
  o.kind = OracleKind::RandomSample;
  o.k = k;
  o.seed = seed;
  return o;
}

SkipSearchOracle SkipSearchOracle::external(std::filesystem::path file) {
  SkipSearchOracle o;
  o.kind = OracleKind::External;
  o.file = std::move(file);
  return o;
}

SkipSearchOracle SkipSearchOracle::parse(std::string_view text) {
  if (text == "allskip" || text == "all") return all_skip();
  if (text.rfind("file:", 0) == 0) return external(std::string(text.substr(5)));
  if (text.rfind("random:", 0) == 0) {
    const std::string rest(text.substr(7));
    const auto colon = rest.find(':');
    try {
      const int k = std::stoi(rest.substr(0, colon));
      const std::uint64_t seed = colon == std::string::npos ? 0 : std::stoull(rest.substr(colon + 1));
      return random_sample(k, seed);
    } catch (const std::logic_error&) {
      throw SpecError("malformed oracle '" + std::string(text) + "' (random:K:SEED)");
    }
  }
  throw SpecError("unknown oracle '" + std::string(text) + "' (allskip|random:K:SEED|file:PATH)");
}

SkipPlan SkipSearchOracle::propose(int depth) const {
  SkipPlan p;
  p.depth = depth;
  switch (kind) {
    case OracleKind::AllSkip:
      p.filters.assign(static_cast<std::size_t>(depth), 5);
      for (int i = 0; i < depth; ++i) {
        std::vector<int> s(static_cast<std::size_t>(i));
        for (int k2 = 0; k2 < i; ++k2) s[static_cast<std::size_t>(k2)] = k2;
        p.skips.push_back(std::move(s));
      }
      break;
    case OracleKind::RandomSample: {
      crypto::Prg prg(crypto::derive_seed(crypto::seed_block(seed), "skip-oracle", static_cast<std::uint64_t>(depth)));
      for (int i = 0; i < depth; ++i) {
        p.filters.push_back(prg.next_bit() ? 5 : 3);
        std::vector<int> pool(static_cast<std::size_t>(i));
        for (int j = 0; j < i; ++j) pool[static_cast<std::size_t>(j)] = j;
        const int take = std::min(k, i);
        // Partial Fisher-Yates.
        for (int j = 0; j < take; ++j) {
          const auto r = j + static_cast<int>(prg.uniform(static_cast<std::uint64_t>(i - j)));
          std::swap(pool[static_cast<std::size_t>(j)], pool[static_cast<std::size_t>(r)]);
        }
        std::vector<int> s(pool.begin(), pool.begin() + take);
        std::sort(s.begin(), s.end());
        p.skips.push_back(std::move(s));
      }
      break;
    }
    case OracleKind::External:
      p = load_skip_plan(file);
      if (p.depth != depth)
        throw SpecError("skip plan " + file.string() + " has depth " + std::to_string(p.depth) + ", expected " +
                        std::to_string(depth));
      break;
  }
  p.validate();
  return p;
}

std::string SkipSearchOracle::describe() const {
  switch (kind) {
    case OracleKind::AllSkip: return "allskip";
    case OracleKind::RandomSample: return "random:" + std::to_string(k) + ":" + std::to_string(seed);
    case OracleKind::External: return "file:" + file.string();
  }
  return "?";
}

}  // namespace ciphernet::planner
