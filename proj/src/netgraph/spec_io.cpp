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

#include "ciphernet/netgraph/spec_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

#include "ciphernet/error.hpp"

namespace ciphernet::netgraph {

using nlohmann::json;

namespace {

int get_int(const json& j, const char* key, int fallback, int node_id) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  const auto& v = j.at(key);
  if (!v.is_number_integer()) throw SpecError(node_id, std::string("field '") + key + "' must be an integer");
  return v.get<int>();
}

}  // namespace

NetworkSpec parse_spec(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SpecError(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw SpecError("spec must be a JSON object");
  for (const char* key : {"depth", "input", "layers"})
    if (!j.contains(key)) throw SpecError(std::string("missing top-level key '") + key + "'");

  const auto& in = j.at("input");
  if (!in.is_array() || in.size() != 3 || !in[0].is_number_integer() || !in[1].is_number_integer() ||
      !in[2].is_number_integer())
    throw SpecError("'input' must be [H, H, C]");
  if (in[0].get<int>() != in[1].get<int>()) throw SpecError("'input' must be square");
  if (!j.at("depth").is_number_integer()) throw SpecError("'depth' must be an integer");

  int alpha = 2;
  if (j.contains("alpha")) {
    if (!j.at("alpha").is_number_integer()) throw SpecError("'alpha' must be an integer");
    alpha = j.at("alpha").get<int>();
  }

  const auto& layers = j.at("layers");
  if (!layers.is_array()) throw SpecError("'layers' must be an array");
  std::vector<LayerNode> nodes;
  nodes.reserve(layers.size());
  for (const auto& l : layers) {
    if (!l.is_object()) throw SpecError("layer entries must be objects");
    if (!l.contains("id") || !l.at("id").is_number_integer()) throw SpecError("layer without integer 'id'");
    LayerNode n;
    n.id = l.at("id").get<int>();
    if (!l.contains("kind") || !l.at("kind").is_string()) throw SpecError(n.id, "missing 'kind'");
    try {
      n.kind = parse_layer_kind(l.at("kind").get<std::string>());
    } catch (const SpecError& e) {
      throw SpecError(n.id, e.what());
    }
    n.filter = get_int(l, "filter", 0, n.id);
    n.out_channels = get_int(l, "out_channels", 0, n.id);
    n.stride = get_int(l, "stride", 1, n.id);
    if (!l.contains("inputs") || !l.at("inputs").is_array()) throw SpecError(n.id, "missing 'inputs' array");
    for (const auto& x : l.at("inputs")) {
      if (!x.is_number_integer()) throw SpecError(n.id, "'inputs' must hold integers");
      n.inputs.push_back(x.get<int>());
    }
    nodes.push_back(std::move(n));
  }

  std::vector<std::vector<int>> skips;
  if (j.contains("skips")) {
    const auto& s = j.at("skips");
    if (!s.is_array()) throw SpecError("'skips' must be an array of arrays");
    for (const auto& row : s) {
      if (!row.is_array()) throw SpecError("'skips' must be an array of arrays");
      std::vector<int> r;
      for (const auto& x : row) {
        if (!x.is_number_integer()) throw SpecError("'skips' entries must be integers");
        r.push_back(x.get<int>());
      }
      skips.push_back(std::move(r));
    }
    // An all-empty skip list is the same as no skip metadata.
    bool any = false;
    for (const auto& r : skips) any = any || !r.empty();
    if (!any && static_cast<int>(skips.size()) != j.at("depth").get<int>()) skips.clear();
  }

  return NetworkSpec(j.at("depth").get<int>(), Shape{in[0].get<int>(), in[2].get<int>()}, alpha, std::move(nodes),
                     std::move(skips));
}

std::string to_json(const NetworkSpec& spec) {
  json j;
  j["depth"] = spec.depth();
  j["input"] = {spec.input_shape().height, spec.input_shape().height, spec.input_shape().channels};
  j["alpha"] = spec.alpha();
  json layers = json::array();
  for (const auto& n : spec.nodes()) {
    json l;
    l["id"] = n.id;
    l["kind"] = std::string(to_string(n.kind));
    l["filter"] = n.filter;
    l["out_channels"] = n.out_channels;
    l["stride"] = n.stride;
    l["inputs"] = n.inputs;
    layers.push_back(std::move(l));
  }
  j["layers"] = std::move(layers);
  j["skips"] = spec.skips().empty() ? json::array() : json(spec.skips());
  return j.dump(2) + "\n";
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot write " + path.string());
  f.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!f) throw IoError("short write to " + path.string());
}

NetworkSpec load_spec(const std::filesystem::path& path) { return parse_spec(read_text_file(path)); }

void save_spec(const NetworkSpec& spec, const std::filesystem::path& path) { write_text_file(path, to_json(spec)); }

}  // namespace ciphernet::netgraph
