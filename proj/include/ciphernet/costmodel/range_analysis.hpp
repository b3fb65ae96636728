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

#include <vector>

#include "ciphernet/mpcore/fixed_point.hpp"
#include "ciphernet/netgraph/spec.hpp"
#include "ciphernet/netgraph/weights.hpp"

namespace ciphernet::costmodel {

struct NodeRange {
  int id = 0;
  int in_exp = 0;
  int out_exp = 0;
  double in_bound = 0.0;   ///< max |aligned input| in field units
  double out_bound = 0.0;  ///< max |output| in field units
};

struct RangeReport {
  std::vector<NodeRange> nodes;  ///< spec node order
  int max_scale_exp = 0;
  double max_bound = 0.0;
  double limit = 0.0;  ///< p / 4
};

/// Interval bound on every fixed-point value the protocol handles, for
/// inputs with |x| <= input_bound. Linear rows use the L1 norm of their
/// quantized kernel plus |bias|; a Relu divides by 2^shift and adds one.
/// Throws OverflowError naming the first node whose bound reaches p/4 or
/// whose exponent exceeds cfg.max_scale_exponent.
RangeReport analyze_range(const netgraph::NetworkSpec& spec, const netgraph::Weights& weights,
                          const mpcore::FxpConfig& cfg, double input_bound);

}  // namespace ciphernet::costmodel
