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
#include <span>

#include "ciphernet/kernels/conv_kernels.hpp"
#include "ciphernet/mpcore/field.hpp"

namespace ciphernet::kernels {

/// Convolution over F_p with the same geometry and layout as the float
/// kernel. Products are accumulated in 128 bits and reduced lazily.
void conv2d_field(const mpcore::Field& field, const ConvGeom& g, std::span<const std::uint64_t> in,
                  std::span<const std::uint64_t> kernel, std::span<std::uint64_t> out, Exec exec = Exec::Parallel);

/// out[o] = sum_i w[o][i] * x[i] mod p.
void matvec_field(const mpcore::Field& field, std::size_t rows, std::size_t cols, std::span<const std::uint64_t> w,
                  std::span<const std::uint64_t> x, std::span<std::uint64_t> out, Exec exec = Exec::Parallel);

/// Window sums (no division) over `window` x `window` blocks, mod p.
void sum_pool_field(const mpcore::Field& field, int height, int channels, int window, int stride,
                    std::span<const std::uint64_t> in, std::span<std::uint64_t> out);

}  // namespace ciphernet::kernels
