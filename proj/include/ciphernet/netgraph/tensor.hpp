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
#include <vector>

#include "ciphernet/netgraph/spec.hpp"

namespace ciphernet::netgraph {

/// Real-valued activation, HWC layout: index = (y * H + x) * C + c.
struct TensorF {
  Shape shape;
  std::vector<float> values;

  TensorF() = default;
  explicit TensorF(Shape s) : shape(s), values(s.elements(), 0.0f) {}
  TensorF(Shape s, std::vector<float> v);
};

/// Field-encoded fixed-point activation: real value = signed(v) / 2^scale_exp.
struct TensorQ {
  Shape shape;
  std::vector<std::uint64_t> values;
  int scale_exp = 0;
  std::uint64_t modulus = 0;

  TensorQ() = default;
  TensorQ(Shape s, int exp, std::uint64_t p) : shape(s), values(s.elements(), 0), scale_exp(exp), modulus(p) {}
};

}  // namespace ciphernet::netgraph
