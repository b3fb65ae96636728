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
#include <string>
#include <vector>

#include "ciphernet/mpcore/fixed_point.hpp"

namespace ciphernet::costmodel {

/// Median online cost of one W x W x 8 conv (8 3x3 filters) and the ReLU
/// after it, taken from the server's transcript.
struct BenchSample {
  int width = 0;
  std::uint64_t macs = 0;
  std::uint64_t relus = 0;
  double conv_ms = 0.0;
  double relu_ms = 0.0;
  std::uint64_t conv_bytes = 0;
  std::uint64_t relu_bytes = 0;

  double mac_ms_per_element() const { return macs ? conv_ms / static_cast<double>(macs) : 0.0; }
  double relu_ms_per_element() const { return relus ? relu_ms / static_cast<double>(relus) : 0.0; }
};

struct CostCalibration {
  double relu_ms = 0.0;
  double relu_bytes = 0.0;
  double mac_ms = 0.0;
  double mac_bytes = 0.0;
  double round_ms = 0.0;
  int reps = 0;
  std::string fingerprint;
  std::vector<BenchSample> samples;
};

/// OS, CPU model, compiler and thread count in one line.
std::string environment_fingerprint();

struct BenchOptions {
  std::vector<int> sizes{8, 16, 32, 64};
  int reps = 10;
  std::uint64_t seed = 1;
  mpcore::FxpConfig fxp{};
};

/// Runs the sweep through the full local protocol and fits
///   conv_ms = macs c_mac + c_round,  relu_ms = relus c_relu + 2 c_round
/// by non-negative least squares. Throws SpecError if reps < 5.
CostCalibration microbench(const BenchOptions& options);

/// Non-negative least squares for (c_mac, c_relu, c_round) over the samples.
void fit_calibration(CostCalibration& calib);

std::string to_json(const CostCalibration& c);
CostCalibration parse_calibration(std::string_view text);
CostCalibration load_calibration(const std::filesystem::path& path);
void save_calibration(const CostCalibration& c, const std::filesystem::path& path);

}  // namespace ciphernet::costmodel
