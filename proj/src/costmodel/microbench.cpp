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

#include "ciphernet/costmodel/microbench.hpp"

#include <sys/utsname.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include "json.hpp"
#include <thread>

#include "ciphernet/crypto/prg.hpp"
#include "ciphernet/error.hpp"
#include "ciphernet/netgraph/infer.hpp"
#include "ciphernet/netgraph/spec_io.hpp"
#include "ciphernet/netgraph/weights.hpp"
#include "ciphernet/protocol/session.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ciphernet::costmodel {

using nlohmann::json;

std::string environment_fingerprint() {
  std::string out;
  struct utsname u{};
  if (uname(&u) == 0) out += std::string(u.sysname) + " " + u.release + " " + u.machine;
  std::ifstream cpu("/proc/cpuinfo");
  std::string line;
  while (std::getline(cpu, line)) {
    if (line.rfind("model name", 0) == 0) {
      const auto colon = line.find(':');
      if (colon != std::string::npos) out += " |" + line.substr(colon + 1);
      break;
    }
  }
#if defined(__clang__)
  out += " | clang " __clang_version__;
#elif defined(__GNUC__)
  out += " | gcc " __VERSION__;
#endif
  int threads = 1;
#ifdef _OPENMP
  threads = omp_get_max_threads();
#endif
  out += " | threads " + std::to_string(threads);
  return out;
}

namespace {

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

constexpr int kConvId = 1;
constexpr int kReluId = 2;

netgraph::NetworkSpec sweep_net(int w) {
  std::vector<netgraph::LayerNode> nodes(2);
  nodes[0].id = kConvId;
  nodes[0].kind = netgraph::LayerKind::Conv;
  nodes[0].filter = 3;
  nodes[0].out_channels = 8;
  nodes[0].inputs = {netgraph::kNetworkInput};
  nodes[1].id = kReluId;
  nodes[1].kind = netgraph::LayerKind::Relu;
  nodes[1].inputs = {kConvId};
  return netgraph::NetworkSpec(1, {w, 8}, 2, nodes);
}

/// Solves the 3x3 normal equations restricted to the columns in `active`.
bool solve_subset(const std::vector<std::array<double, 3>>& a, const std::vector<double>& b, unsigned active,
                  std::array<double, 3>& x) {
  std::vector<int> cols;
  for (int j = 0; j < 3; ++j)
    if (active & (1u << j)) cols.push_back(j);
  x = {0, 0, 0};
  if (cols.empty()) return true;
  const std::size_t k = cols.size();
  std::vector<std::vector<double>> m(k, std::vector<double>(k + 1, 0.0));
  for (std::size_t r = 0; r < a.size(); ++r)
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < k; ++j) m[i][j] += a[r][cols[i]] * a[r][cols[j]];
      m[i][k] += a[r][cols[i]] * b[r];
    }
  for (std::size_t c = 0; c < k; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < k; ++r)
      if (std::fabs(m[r][c]) > std::fabs(m[piv][c])) piv = r;
    if (std::fabs(m[piv][c]) < 1e-300) return false;
    std::swap(m[c], m[piv]);
    for (std::size_t r = 0; r < k; ++r) {
      if (r == c) continue;
      const double f = m[r][c] / m[c][c];
      for (std::size_t j = c; j <= k; ++j) m[r][j] -= f * m[c][j];
    }
  }
  for (std::size_t i = 0; i < k; ++i) x[static_cast<std::size_t>(cols[i])] = m[i][k] / m[i][i];
  return true;
}

}  // namespace

void fit_calibration(CostCalibration& c) {
  // Unknowns (c_mac, c_relu, c_round). Columns are rescaled so the normal
  // equations stay well conditioned.
  std::vector<std::array<double, 3>> a;
  std::vector<double> b;
  std::array<double, 3> scale{0, 0, 0};
  for (const auto& s : c.samples) {
    a.push_back({static_cast<double>(s.macs), 0.0, 1.0});
    b.push_back(s.conv_ms);
    a.push_back({0.0, static_cast<double>(s.relus), 2.0});
    b.push_back(s.relu_ms);
  }
  for (const auto& row : a)
    for (int j = 0; j < 3; ++j) scale[j] = std::max(scale[j], std::fabs(row[j]));
  for (auto& row : a)
    for (int j = 0; j < 3; ++j)
      if (scale[j] > 0) row[j] /= scale[j];

  // Exhaustive active-set search: with three unknowns every subset is cheap.
  double best_res = std::numeric_limits<double>::infinity();
  std::array<double, 3> best{0, 0, 0};
  for (unsigned active = 0; active < 8; ++active) {
    std::array<double, 3> x{};
    if (!solve_subset(a, b, active, x)) continue;
    if (x[0] < 0 || x[1] < 0 || x[2] < 0) continue;
    double res = 0.0;
    for (std::size_t r = 0; r < a.size(); ++r) {
      const double e = a[r][0] * x[0] + a[r][1] * x[1] + a[r][2] * x[2] - b[r];
      res += e * e;
    }
    if (res < best_res) {
      best_res = res;
      best = x;
    }
  }
  c.mac_ms = scale[0] > 0 ? best[0] / scale[0] : 0.0;
  c.relu_ms = scale[1] > 0 ? best[1] / scale[1] : 0.0;
  c.round_ms = scale[2] > 0 ? best[2] / scale[2] : 0.0;

  double mb = 0.0, rb = 0.0;
  for (const auto& s : c.samples) {
    mb += s.macs ? static_cast<double>(s.conv_bytes) / static_cast<double>(s.macs) : 0.0;
    rb += s.relus ? static_cast<double>(s.relu_bytes) / static_cast<double>(s.relus) : 0.0;
  }
  if (!c.samples.empty()) {
    c.mac_bytes = mb / static_cast<double>(c.samples.size());
    c.relu_bytes = rb / static_cast<double>(c.samples.size());
  }
}

CostCalibration microbench(const BenchOptions& o) {
  if (o.reps < 5) throw SpecError("microbench needs at least 5 repetitions, got " + std::to_string(o.reps));
  if (o.sizes.empty()) throw SpecError("microbench needs at least one size");
  CostCalibration c;
  c.reps = o.reps;
  c.fingerprint = environment_fingerprint();
  for (int w : o.sizes) {
    const netgraph::NetworkSpec spec = sweep_net(w);
    const netgraph::Weights weights =
        netgraph::random_weights(spec, o.seed, netgraph::WeightInit::ContractiveDyadic, o.fxp.frac_bits);
    crypto::Prg prg(crypto::derive_seed(crypto::seed_block(o.seed), "bench-input", static_cast<std::uint64_t>(w)));
    netgraph::TensorF x(spec.input_shape());
    for (float& v : x.values) v = static_cast<float>(prg.uniform_real(-1.0, 1.0));
    const netgraph::TensorQ xq = netgraph::encode_tensor(x, o.fxp);

    std::vector<double> conv_ms, relu_ms;
    BenchSample s;
    s.width = w;
    s.macs = static_cast<std::uint64_t>(w) * w * 8 * 9 * 8;
    s.relus = static_cast<std::uint64_t>(w) * w * 8;
    for (int r = 0; r < o.reps; ++r) {
      const auto run = protocol::run_local(spec, weights, o.fxp, xq, o.seed + static_cast<std::uint64_t>(r));
      for (const auto& row : run.server.rows) {
        if (row.layer == kConvId && row.phase == protocol::Phase::Linear) {
          conv_ms.push_back(row.ms);
          s.conv_bytes = row.bytes_out + row.bytes_in;
        } else if (row.layer == kReluId && row.phase == protocol::Phase::Relu) {
          relu_ms.push_back(row.ms);
          s.relu_bytes = row.bytes_out + row.bytes_in;
        }
      }
    }
    if (conv_ms.size() != static_cast<std::size_t>(o.reps) || relu_ms.size() != static_cast<std::size_t>(o.reps))
      throw ProtocolError("transcript is missing benchmark rows");
    s.conv_ms = median(conv_ms);
    s.relu_ms = median(relu_ms);
    c.samples.push_back(s);
  }
  fit_calibration(c);
  return c;
}

std::string to_json(const CostCalibration& c) {
  json j;
  j["format"] = "ciphernet-calibration/1";
  j["fingerprint"] = c.fingerprint;
  j["reps"] = c.reps;
  j["relu_ms"] = c.relu_ms;
  j["relu_bytes"] = c.relu_bytes;
  j["mac_ms"] = c.mac_ms;
  j["mac_bytes"] = c.mac_bytes;
  j["round_ms"] = c.round_ms;
  j["samples"] = json::array();
  for (const auto& s : c.samples)
    j["samples"].push_back({{"width", s.width},
                            {"macs", s.macs},
                            {"relus", s.relus},
                            {"conv_ms", s.conv_ms},
                            {"relu_ms", s.relu_ms},
                            {"conv_bytes", s.conv_bytes},
                            {"relu_bytes", s.relu_bytes},
                            {"relu_to_mac_ratio", s.mac_ms_per_element() > 0
                                                      ? s.relu_ms_per_element() / s.mac_ms_per_element()
                                                      : 0.0}});
  return j.dump(2) + "\n";
}

CostCalibration parse_calibration(std::string_view text) {
  CostCalibration c;
  try {
    const json j = json::parse(text);
    c.fingerprint = j.at("fingerprint").get<std::string>();
    c.reps = j.value("reps", 0);
    c.relu_ms = j.at("relu_ms").get<double>();
    c.relu_bytes = j.value("relu_bytes", 0.0);
    c.mac_ms = j.at("mac_ms").get<double>();
    c.mac_bytes = j.value("mac_bytes", 0.0);
    c.round_ms = j.at("round_ms").get<double>();
    if (j.contains("samples"))
      for (const auto& s : j.at("samples"))
        c.samples.push_back({s.at("width").get<int>(), s.at("macs").get<std::uint64_t>(),
                             s.at("relus").get<std::uint64_t>(), s.at("conv_ms").get<double>(),
                             s.at("relu_ms").get<double>(), s.value("conv_bytes", std::uint64_t{0}),
                             s.value("relu_bytes", std::uint64_t{0})});
  } catch (const json::exception& e) {
    throw SpecError(std::string("malformed calibration: ") + e.what());
  }
  if (c.relu_ms < 0 || c.mac_ms < 0 || c.round_ms < 0 || c.relu_bytes < 0 || c.mac_bytes < 0)
    throw SpecError("calibration costs must be non-negative");
  return c;
}

CostCalibration load_calibration(const std::filesystem::path& path) {
  return parse_calibration(netgraph::read_text_file(path));
}

void save_calibration(const CostCalibration& c, const std::filesystem::path& path) {
  netgraph::write_text_file(path, to_json(c));
}

}  // namespace ciphernet::costmodel
