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

#include "ciphernet/kernels/conv_kernels.hpp"

#include <algorithm>
#include <vector>

#include "ciphernet/error.hpp"

namespace ciphernet::kernels {

namespace {

void check_conv(const ConvGeom& g, std::size_t in, std::size_t kernel, std::size_t bias, std::size_t out) {
  if (in != g.in_size() || kernel != g.kernel_size() || out != g.out_size() ||
      (bias != 0 && bias != static_cast<std::size_t>(g.out_channels)))
    throw ShapeError("conv2d: buffer sizes do not match the geometry");
}

void conv2d_serial(const ConvGeom& g, std::span<const float> in, std::span<const float> kernel,
                   std::span<const float> bias, std::span<float> out) {
  const int ho = g.out_height();
  const int pad = g.filter / 2;
  for (int y = 0; y < ho; ++y)
    for (int x = 0; x < ho; ++x)
      for (int co = 0; co < g.out_channels; ++co) {
        double acc = bias.empty() ? 0.0 : bias[co];
        for (int dy = 0; dy < g.filter; ++dy)
          for (int dx = 0; dx < g.filter; ++dx) {
            const int iy = y * g.stride + dy - pad;
            const int ix = x * g.stride + dx - pad;
            if (iy < 0 || ix < 0 || iy >= g.height || ix >= g.height) continue;
            for (int ci = 0; ci < g.in_channels; ++ci)
              acc += static_cast<double>(kernel[((static_cast<std::size_t>(co) * g.filter + dy) * g.filter + dx) *
                                                    g.in_channels + ci]) *
                     in[(static_cast<std::size_t>(iy) * g.height + ix) * g.in_channels + ci];
          }
        out[(static_cast<std::size_t>(y) * ho + x) * g.out_channels + co] = static_cast<float>(acc);
      }
}

void conv2d_parallel(const ConvGeom& g, std::span<const float> in, std::span<const float> kernel,
                     std::span<const float> bias, std::span<float> out) {
  const int ho = g.out_height();
  const int pad = g.filter / 2;
  const int F = g.filter;
  const int cin = g.in_channels;
  const int cout = g.out_channels;
#pragma omp parallel for schedule(static)
  for (int y = 0; y < ho; ++y) {
    std::vector<double> acc(static_cast<std::size_t>(cout));
    for (int x = 0; x < ho; ++x) {
      for (int co = 0; co < cout; ++co) acc[co] = bias.empty() ? 0.0 : bias[co];
      for (int dy = 0; dy < F; ++dy) {
        const int iy = y * g.stride + dy - pad;
        if (iy < 0 || iy >= g.height) continue;
        for (int dx = 0; dx < F; ++dx) {
          const int ix = x * g.stride + dx - pad;
          if (ix < 0 || ix >= g.height) continue;
          const float* px = in.data() + (static_cast<std::size_t>(iy) * g.height + ix) * cin;
          for (int co = 0; co < cout; ++co) {
            const float* k = kernel.data() + ((static_cast<std::size_t>(co) * F + dy) * F + dx) * cin;
            double s = 0.0;
            for (int ci = 0; ci < cin; ++ci) s += static_cast<double>(k[ci]) * px[ci];
            acc[co] += s;
          }
        }
      }
      float* o = out.data() + (static_cast<std::size_t>(y) * ho + x) * cout;
      for (int co = 0; co < cout; ++co) o[co] = static_cast<float>(acc[co]);
    }
  }
}

}  // namespace

void conv2d(const ConvGeom& g, std::span<const float> in, std::span<const float> kernel, std::span<const float> bias,
            std::span<float> out, Exec exec) {
  check_conv(g, in.size(), kernel.size(), bias.size(), out.size());
  if (exec == Exec::Serial)
    conv2d_serial(g, in, kernel, bias, out);
  else
    conv2d_parallel(g, in, kernel, bias, out);
}

void matvec(std::size_t rows, std::size_t cols, std::span<const float> w, std::span<const float> x,
            std::span<const float> bias, std::span<float> out, Exec exec) {
  if (w.size() != rows * cols || x.size() != cols || out.size() != rows || (!bias.empty() && bias.size() != rows))
    throw ShapeError("matvec: buffer sizes do not match " + std::to_string(rows) + "x" + std::to_string(cols));
  const auto n = static_cast<std::ptrdiff_t>(rows);
  if (exec == Exec::Serial) {
    for (std::ptrdiff_t o = 0; o < n; ++o) {
      double acc = bias.empty() ? 0.0 : bias[o];
      for (std::size_t i = 0; i < cols; ++i) acc += static_cast<double>(w[o * cols + i]) * x[i];
      out[o] = static_cast<float>(acc);
    }
    return;
  }
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t o = 0; o < n; ++o) {
    const float* row = w.data() + o * cols;
    double acc = 0.0;
    for (std::size_t i = 0; i < cols; ++i) acc += static_cast<double>(row[i]) * x[i];
    out[o] = static_cast<float>(acc + (bias.empty() ? 0.0 : bias[o]));
  }
}

void avg_pool(int height, int channels, int window, int stride, std::span<const float> in, std::span<float> out) {
  const int ho = height / stride;
  if (in.size() != static_cast<std::size_t>(height) * height * channels ||
      out.size() != static_cast<std::size_t>(ho) * ho * channels)
    throw ShapeError("avg_pool: buffer sizes do not match the geometry");
  const double inv = 1.0 / (static_cast<double>(window) * window);
  for (int y = 0; y < ho; ++y)
    for (int x = 0; x < ho; ++x)
      for (int c = 0; c < channels; ++c) {
        double s = 0.0;
        for (int dy = 0; dy < window; ++dy)
          for (int dx = 0; dx < window; ++dx)
            s += in[(static_cast<std::size_t>(y * stride + dy) * height + (x * stride + dx)) * channels + c];
        out[(static_cast<std::size_t>(y) * ho + x) * channels + c] = static_cast<float>(s * inv);
      }
}

}  // namespace ciphernet::kernels
