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

#include <cstddef>
#include <span>

namespace ciphernet::kernels {

/// Serial kernels are the straightforward nested-loop reference; Parallel
/// variants reorder loops and split output rows across OpenMP threads.
enum class Exec { Serial, Parallel };

/// Geometry of a "same"-padded square convolution in HWC layout.
struct ConvGeom {
  int height = 0;     // input resolution
  int in_channels = 0;
  int out_channels = 0;
  int filter = 1;     // odd
  int stride = 1;

  int out_height() const { return height / stride; }
  std::size_t in_size() const { return static_cast<std::size_t>(height) * height * in_channels; }
  std::size_t out_size() const {
    return static_cast<std::size_t>(out_height()) * out_height() * out_channels;
  }
  std::size_t kernel_size() const {
    return static_cast<std::size_t>(out_channels) * filter * filter * in_channels;
  }
};

/// out[y][x][co] = bias[co] + sum kernel[co][dy][dx][ci] * in[y*s+dy-F/2][x*s+dx-F/2][ci].
/// `bias` may be empty.
void conv2d(const ConvGeom& g, std::span<const float> in, std::span<const float> kernel,
            std::span<const float> bias, std::span<float> out, Exec exec = Exec::Parallel);

/// out[o] = bias[o] + sum_i w[o][i] * x[i]; `bias` may be empty.
void matvec(std::size_t rows, std::size_t cols, std::span<const float> w, std::span<const float> x,
            std::span<const float> bias, std::span<float> out, Exec exec = Exec::Parallel);

/// Average pooling over `window` x `window` blocks moved by `stride`.
void avg_pool(int height, int channels, int window, int stride, std::span<const float> in, std::span<float> out);

}  // namespace ciphernet::kernels
