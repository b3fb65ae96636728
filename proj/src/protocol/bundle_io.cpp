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

#include "ciphernet/protocol/bundle_io.hpp"

#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "ciphernet/error.hpp"
#include "ciphernet/garble/wire_format.hpp"
#include "ciphernet/netgraph/spec_io.hpp"
#include "json.hpp"

namespace ciphernet::protocol {

namespace fs = std::filesystem;
using nlohmann::json;

std::vector<std::uint8_t> read_binary_file(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path.string());
  return std::vector<std::uint8_t>((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
}

void write_binary_file(const fs::path& path, std::span<const std::uint8_t> data) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot write " + path.string());
  f.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
  if (!f) throw IoError("short write to " + path.string());
}

void write_cnt(ByteWriter& w, const CntRecord& rec) {
  w.bytes(std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>("CNT1"), 4));
  w.u64(rec.modulus);
  w.i32(rec.layer_id);
  w.u64(rec.values.size());
  w.u64s(rec.values);
}

CntRecord read_cnt(ByteReader& r) {
  auto magic = r.bytes(4);
  if (std::memcmp(magic.data(), "CNT1", 4) != 0) throw IoError("bad CNT1 magic");
  CntRecord rec;
  rec.modulus = r.u64();
  rec.layer_id = r.i32();
  const std::uint64_t n = r.u64();
  if (n > r.remaining() / 8) throw IoError("CNT1 record count exceeds the file");
  rec.values = r.u64s(n);
  for (auto v : rec.values)
    if (v >= rec.modulus) throw IoError("CNT1 record for layer " + std::to_string(rec.layer_id) + " holds a value >= p");
  return rec;
}

namespace {

std::string hex64(std::uint64_t v) {
  std::ostringstream s;
  s << std::hex << std::setw(16) << std::setfill('0') << v;
  return s.str();
}

std::uint64_t parse_hex64(const json& j) { return std::stoull(j.get<std::string>(), nullptr, 16); }

void put_magic(ByteWriter& w, const char* m) {
  w.bytes(std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>(m), 4));
}

void check_magic(ByteReader& r, const char* m, const fs::path& path) {
  auto got = r.bytes(4);
  if (std::memcmp(got.data(), m, 4) != 0) throw IoError(path.string() + ": expected magic " + m);
}

json header_json(const BundleHeader& h) {
  return json{{"modulus", h.modulus},
              {"frac_bits", h.frac_bits},
              {"bit_width", h.bit_width},
              {"spec_digest", hex64(h.spec_digest)},
              {"dealing_id", hex64(h.dealing_id)}};
}

struct Manifest {
  BundleHeader header;
  std::map<int, mpcore::TripleBinding> bindings;
  std::map<int, std::uint64_t> relu_counts;
};

Manifest load_manifest(const fs::path& dir) {
  const fs::path path = dir / "manifest.json";
  json j;
  try {
    j = json::parse(netgraph::read_text_file(path));
  } catch (const json::exception& e) {
    throw IoError(path.string() + ": " + e.what());
  }
  try {
    Manifest m;
    if (j.at("format") != "ciphernet-offline/1") throw IoError(path.string() + ": unsupported format");
    const json& h = j.at("header");
    m.header.modulus = h.at("modulus").get<std::uint64_t>();
    m.header.frac_bits = h.at("frac_bits").get<int>();
    m.header.bit_width = h.at("bit_width").get<int>();
    m.header.spec_digest = parse_hex64(h.at("spec_digest"));
    m.header.dealing_id = parse_hex64(h.at("dealing_id"));
    for (const auto& l : j.at("linear")) {
      mpcore::TripleBinding b;
      b.layer_id = l.at("id").get<int>();
      b.rows = l.at("rows").get<std::uint64_t>();
      b.cols = l.at("cols").get<std::uint64_t>();
      b.weight_digest = parse_hex64(l.at("weight_digest"));
      m.bindings.emplace(b.layer_id, b);
    }
    for (const auto& r : j.at("relu")) m.relu_counts.emplace(r.at("id").get<int>(), r.at("count").get<std::uint64_t>());
    return m;
  } catch (const json::exception& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

}  // namespace

void save_bundles(const fs::path& dir, const CompiledNet& net, const ClientBundle& client, const ServerBundle& server) {
  std::error_code ec;
  fs::create_directories(dir / "client", ec);
  fs::create_directories(dir / "server", ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());

  json manifest;
  manifest["format"] = "ciphernet-offline/1";
  manifest["header"] = header_json(client.header);
  json linear = json::array();
  for (const auto& [id, t] : server.triples)
    linear.push_back({{"id", id},
                      {"kind", std::string(netgraph::to_string(net.spec().node(id).kind))},
                      {"rows", t.binding.rows},
                      {"cols", t.binding.cols},
                      {"weight_digest", hex64(t.binding.weight_digest)}});
  json relu = json::array();
  for (const auto& [id, r] : client.relus) {
    const auto& node = net.nodes()[net.spec().index_of(id)];
    relu.push_back({{"id", id}, {"count", r.r.size()}, {"shift", node.shift}, {"and_gates", r.tables.and_count}});
  }
  manifest["linear"] = linear;
  manifest["relu"] = relu;
  netgraph::write_text_file(dir / "manifest.json", manifest.dump(2) + "\n");

  const std::uint64_t p = client.header.modulus;
  {
    ByteWriter w;
    write_cnt(w, {p, netgraph::kNetworkInput, client.input_mask});
    for (const auto& [id, t] : client.triples) write_cnt(w, {p, id, t.v});
    for (const auto& [id, r] : client.relus) write_cnt(w, {p, id, r.r});
    write_binary_file(dir / "client" / "masks.cnt", w.data());
  }
  {
    ByteWriter w;
    put_magic(w, "GCT1");
    w.u32(static_cast<std::uint32_t>(client.relus.size()));
    for (const auto& [id, r] : client.relus) {
      w.i32(id);
      garble::write_tables(w, r.tables);
    }
    write_binary_file(dir / "client" / "gadgets.bin", w.data());
  }
  {
    ByteWriter w;
    put_magic(w, "OTR1");
    w.u32(static_cast<std::uint32_t>(client.relus.size()));
    for (const auto& [id, r] : client.relus) {
      w.i32(id);
      garble::write_receiver_pads(w, r.pads);
    }
    write_binary_file(dir / "client" / "ot.bin", w.data());
  }
  {
    ByteWriter w;
    for (const auto& [id, t] : server.triples) write_cnt(w, {p, id, t.u});
    write_binary_file(dir / "server" / "triples.cnt", w.data());
  }
  {
    ByteWriter w;
    put_magic(w, "GCK1");
    w.u32(static_cast<std::uint32_t>(server.relus.size()));
    for (const auto& [id, r] : server.relus) {
      w.i32(id);
      garble::write_keys(w, r.keys);
    }
    write_binary_file(dir / "server" / "keys.bin", w.data());
  }
  {
    ByteWriter w;
    put_magic(w, "OTS1");
    w.u32(static_cast<std::uint32_t>(server.relus.size()));
    for (const auto& [id, r] : server.relus) {
      w.i32(id);
      garble::write_sender_pads(w, r.pads);
    }
    write_binary_file(dir / "server" / "ot.bin", w.data());
  }
}

ClientBundle load_client_bundle(const fs::path& dir) {
  const Manifest m = load_manifest(dir);
  ClientBundle b;
  b.header = m.header;
  {
    const auto path = dir / "client" / "masks.cnt";
    const auto data = read_binary_file(path);
    ByteReader r(data, path.string());
    bool have_input = false;
    while (r.remaining() > 0) {
      CntRecord rec = read_cnt(r);
      if (rec.modulus != m.header.modulus) throw IoError(path.string() + ": modulus mismatch");
      if (rec.layer_id == netgraph::kNetworkInput) {
        b.input_mask = std::move(rec.values);
        have_input = true;
      } else if (auto it = m.bindings.find(rec.layer_id); it != m.bindings.end()) {
        if (rec.values.size() != it->second.rows) throw IoError(path.string() + ": triple size mismatch");
        b.triples.emplace(rec.layer_id, mpcore::TripleClient{it->second, std::move(rec.values)});
      } else if (m.relu_counts.count(rec.layer_id)) {
        b.relus[rec.layer_id].r = std::move(rec.values);
      } else {
        throw IoError(path.string() + ": record for unknown layer " + std::to_string(rec.layer_id));
      }
    }
    if (!have_input) throw IoError(path.string() + ": missing input mask");
  }
  {
    const auto path = dir / "client" / "gadgets.bin";
    const auto data = read_binary_file(path);
    ByteReader r(data, path.string());
    check_magic(r, "GCT1", path);
    const std::uint32_t n = r.u32();
    for (std::uint32_t i = 0; i < n; ++i) {
      const int id = r.i32();
      b.relus[id].tables = garble::read_tables(r);
    }
    r.expect_end();
  }
  {
    const auto path = dir / "client" / "ot.bin";
    const auto data = read_binary_file(path);
    ByteReader r(data, path.string());
    check_magic(r, "OTR1", path);
    const std::uint32_t n = r.u32();
    for (std::uint32_t i = 0; i < n; ++i) {
      const int id = r.i32();
      b.relus[id].pads = garble::read_receiver_pads(r);
    }
    r.expect_end();
  }
  for (const auto& [id, count] : m.relu_counts) {
    auto it = b.relus.find(id);
    if (it == b.relus.end() || it->second.r.size() != count || it->second.tables.count != count)
      throw IoError("client bundle: incomplete material for relu layer " + std::to_string(id));
  }
  return b;
}

ServerBundle load_server_bundle(const fs::path& dir) {
  const Manifest m = load_manifest(dir);
  ServerBundle b;
  b.header = m.header;
  {
    const auto path = dir / "server" / "triples.cnt";
    const auto data = read_binary_file(path);
    ByteReader r(data, path.string());
    while (r.remaining() > 0) {
      CntRecord rec = read_cnt(r);
      if (rec.modulus != m.header.modulus) throw IoError(path.string() + ": modulus mismatch");
      auto it = m.bindings.find(rec.layer_id);
      if (it == m.bindings.end() || rec.values.size() != it->second.rows)
        throw IoError(path.string() + ": record for layer " + std::to_string(rec.layer_id) + " has no matching binding");
      b.triples.emplace(rec.layer_id, mpcore::TripleServer{it->second, std::move(rec.values)});
    }
  }
  {
    const auto path = dir / "server" / "keys.bin";
    const auto data = read_binary_file(path);
    ByteReader r(data, path.string());
    check_magic(r, "GCK1", path);
    const std::uint32_t n = r.u32();
    for (std::uint32_t i = 0; i < n; ++i) {
      const int id = r.i32();
      b.relus[id].keys = garble::read_keys(r);
    }
    r.expect_end();
  }
  {
    const auto path = dir / "server" / "ot.bin";
    const auto data = read_binary_file(path);
    ByteReader r(data, path.string());
    check_magic(r, "OTS1", path);
    const std::uint32_t n = r.u32();
    for (std::uint32_t i = 0; i < n; ++i) {
      const int id = r.i32();
      b.relus[id].pads = garble::read_sender_pads(r);
    }
    r.expect_end();
  }
  if (b.triples.size() != m.bindings.size()) throw IoError("server bundle: triple count differs from the manifest");
  return b;
}

}  // namespace ciphernet::protocol
