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

#include "ciphernet/costmodel/estimate.hpp"

#include <algorithm>
#include "json.hpp"
#include <set>
#include <sstream>

#include "ciphernet/error.hpp"
#include "ciphernet/netgraph/counting.hpp"
#include "ciphernet/netgraph/spec_io.hpp"

namespace ciphernet::costmodel {

using nlohmann::json;
using netgraph::LayerKind;

std::uint64_t online_rounds(const netgraph::NetworkSpec& spec) {
  std::uint64_t r = 0;
  for (const auto& n : spec.nodes()) {
    if (n.has_weights()) r += 1;
    if (n.kind == LayerKind::Relu) r += 2;
  }
  return r;
}

double estimate_ms(std::uint64_t relus, std::uint64_t macs, std::uint64_t rounds, const CostCalibration& c) {
  return static_cast<double>(relus) * c.relu_ms + static_cast<double>(macs) * c.mac_ms +
         static_cast<double>(rounds) * c.round_ms;
}

CostReport estimate(const netgraph::NetworkSpec& spec, const CostCalibration& calib, std::string network) {
  CostReport r;
  r.network = std::move(network);
  r.relus = netgraph::relu_count(spec);
  r.macs = netgraph::flop_count(spec);
  r.params = netgraph::param_count(spec);
  r.rounds = online_rounds(spec);
  r.estimated_ms = estimate_ms(r.relus, r.macs, r.rounds, calib);
  r.estimated_bytes = static_cast<double>(r.relus) * calib.relu_bytes + static_cast<double>(r.macs) * calib.mac_bytes;
  r.fingerprint = calib.fingerprint;
  return r;
}

std::string to_json(const CostReport& r) {
  json j;
  j["network"] = r.network;
  j["relus"] = r.relus;
  j["macs"] = r.macs;
  j["params"] = r.params;
  j["rounds"] = r.rounds;
  j["estimated_ms"] = r.estimated_ms;
  j["estimated_bytes"] = r.estimated_bytes;
  j["measured_ms"] = r.measured_ms ? json(*r.measured_ms) : json(nullptr);
  j["fingerprint"] = r.fingerprint;
  return j.dump(2) + "\n";
}

CostReport parse_report(std::string_view text) {
  CostReport r;
  try {
    const json j = json::parse(text);
    r.network = j.at("network").get<std::string>();
    r.relus = j.at("relus").get<std::uint64_t>();
    r.macs = j.at("macs").get<std::uint64_t>();
    r.params = j.at("params").get<std::uint64_t>();
    r.rounds = j.value("rounds", std::uint64_t{0});
    r.estimated_ms = j.at("estimated_ms").get<double>();
    r.estimated_bytes = j.value("estimated_bytes", 0.0);
    if (j.contains("measured_ms") && !j.at("measured_ms").is_null()) r.measured_ms = j.at("measured_ms").get<double>();
    r.fingerprint = j.value("fingerprint", std::string());
  } catch (const json::exception& e) {
    throw SpecError(std::string("malformed cost report: ") + e.what());
  }
  return r;
}

std::vector<CostReport> load_reports(const std::filesystem::path& dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) throw IoError("report directory " + dir.string() + " not found");
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::vector<CostReport> out;
  for (const auto& f : files) out.push_back(parse_report(netgraph::read_text_file(f)));
  return out;
}

void check_fingerprints(const std::vector<CostReport>& reports, bool force) {
  std::set<std::string> fps;
  for (const auto& r : reports) fps.insert(r.fingerprint);
  if (fps.size() > 1 && !force)
    throw Error("calibration", "reports come from " + std::to_string(fps.size()) +
                                   " different calibration environments; pass --force to mix them");
}

std::map<std::string, double> parse_accuracy_csv(std::string_view text) {
  std::map<std::string, double> acc;
  std::istringstream in{std::string(text)};
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (header) {
      header = false;
      if (line.rfind("network", 0) == 0) continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw SpecError("accuracy row '" + line + "' is not network,accuracy");
    try {
      acc[line.substr(0, comma)] = std::stod(line.substr(comma + 1));
    } catch (const std::logic_error&) {
      throw SpecError("accuracy row '" + line + "' has a non-numeric accuracy");
    }
  }
  return acc;
}

std::vector<CostReport> pareto_front(const std::vector<CostReport>& reports, const std::map<std::string, double>& acc) {
  for (const auto& r : reports)
    if (!acc.count(r.network)) throw SpecError("no accuracy given for network '" + r.network + "'");
  std::vector<CostReport> front;
  for (const auto& r : reports) {
    const double ar = acc.at(r.network);
    bool dominated = false;
    for (const auto& o : reports) {
      const double ao = acc.at(o.network);
      if (o.estimated_ms <= r.estimated_ms && ao >= ar && (o.estimated_ms < r.estimated_ms || ao > ar)) {
        dominated = true;
        break;
      }
    }
    if (!dominated) front.push_back(r);
  }
  std::stable_sort(front.begin(), front.end(),
                   [](const CostReport& a, const CostReport& b) { return a.estimated_ms < b.estimated_ms; });
  return front;
}

std::string pareto_csv(const std::vector<CostReport>& front, const std::map<std::string, double>& acc) {
  std::ostringstream os;
  os << "network,relus,macs,params,estimated_ms,accuracy\n";
  for (const auto& r : front)
    os << r.network << ',' << r.relus << ',' << r.macs << ',' << r.params << ',' << r.estimated_ms << ','
       << acc.at(r.network) << '\n';
  return os.str();
}

}  // namespace ciphernet::costmodel
