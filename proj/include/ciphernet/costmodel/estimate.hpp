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
#include <vector>

#include "ciphernet/costmodel/microbench.hpp"
#include "ciphernet/netgraph/spec.hpp"

namespace ciphernet::costmodel {

struct CostReport {
  std::string network;
  std::uint64_t relus = 0;
  std::uint64_t macs = 0;
  std::uint64_t params = 0;
  std::uint64_t rounds = 0;
  double estimated_ms = 0.0;
  double estimated_bytes = 0.0;
  std::optional<double> measured_ms;
  std::string fingerprint;
};

/// Linear-layer rounds plus two per Relu node.
std::uint64_t online_rounds(const netgraph::NetworkSpec& spec);

/// relus c_relu + macs c_mac + rounds c_round.
double estimate_ms(std::uint64_t relus, std::uint64_t macs, std::uint64_t rounds, const CostCalibration& calib);

CostReport estimate(const netgraph::NetworkSpec& spec, const CostCalibration& calib, std::string network = "net");

std::string to_json(const CostReport& r);
CostReport parse_report(std::string_view text);
/// Every *.json under `dir`, sorted by file name.
std::vector<CostReport> load_reports(const std::filesystem::path& dir);

/// Throws Error("calibration") if reports carry different fingerprints,
/// unless `force`.
void check_fingerprints(const std::vector<CostReport>& reports, bool force);

/// "network,accuracy" CSV with a header row.
std::map<std::string, double> parse_accuracy_csv(std::string_view text);

/// Reports not dominated in (lower estimated_ms, higher accuracy), by
/// increasing latency. Throws SpecError when a report has no accuracy.
std::vector<CostReport> pareto_front(const std::vector<CostReport>& reports, const std::map<std::string, double>& acc);

/// "network,relus,macs,params,estimated_ms,accuracy"
std::string pareto_csv(const std::vector<CostReport>& front, const std::map<std::string, double>& acc);

}  // namespace ciphernet::costmodel
