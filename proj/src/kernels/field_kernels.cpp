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

#include "ciphernet/kernels/field_kernels.hpp"

#include <vector>

#include "ciphernet/error.hpp"

namespace ciphernet::kernels {

using mpcore::u128;

namespace {

/// Lazily reduced dot-product accumulator.
struct Acc {
  const mpcore::Field& f;
  std::size_t limit;
  u128 sum = 0;
  std::size_t n = 0;

  void add(std::uint64_t a, std::uint64_t b) {
    sum += static_cast<u128>(a) * b;
    if (++n == limit) {
      sum = f.reduce(sum);
      n = 1;
    }
  }
  std::uint64_t value() const { return f.reduce(sum); }
};

void conv_field_serial(const mpcore::Field& field, const ConvGeom& g, std::span<const std::uint64_t> in,
                       std::span<const std::uint64_t> kernel, std::span<std::uint64_t> out) {
  const int ho = g.out_height();
  const int pad = g.filter / 2;
  for (int y = 0; y < ho; ++y)
    for (int x = 0; x < ho; ++x)
      for (int co = 0; co < g.out_channels; ++co) {
        // Exact reference: reduce after every product.
        std::uint64_t acc = 0;
        for (int dy = 0; dy < g.filter; ++dy)
          for (int dx = 0; dx < g.filter; ++dx) {
            const int iy = y * g.stride + dy - pad;
            const int ix = x * g.stride + dx - pad;
            if (iy < 0 || ix < 0 || iy >= g.height || ix >= g.height) continue;
            for (int ci = 0; ci < g.in_channels; ++ci) {
              const auto k = kernel[((static_cast<std::size_t>(co) * g.filter + dy) * g.filter + dx) * g.in_channels + ci];
              const auto v = in[(static_cast<std::size_t>(iy) * g.height + ix) * g.in_channels + ci];
              acc = field.add(acc, field.mul(k, v));
            }
          }
        out[(static_cast<std::size_t>(y) * ho + x) * g.out_channels + co] = acc;
      }
}

void conv_field_parallel(const mpcore::Field& field, const ConvGeom& g, std::span<const std::uint64_t> in,
                         std::span<const std::uint64_t> kernel, std::span<std::uint64_t> out) {
  const int ho = g.out_height();
  const int pad = g.filter / 2;
  const int F = g.filter;
  const int cin = g.in_channels;
  const int cout = g.out_channels;
  const std::size_t limit = field.accumulate_limit();
#pragma omp parallel for schedule(static)
  for (int y = 0; y < ho; ++y) {
    std::vector<Acc> acc(static_cast<std::size_t>(cout), Acc{field, limit});
    for (int x = 0; x < ho; ++x) {
      for (auto& a : acc) a.sum = 0, a.n = 0;
      for (int dy = 0; dy < F; ++dy) {
        const int iy = y * g.stride + dy - pad;
        if (iy < 0 || iy >= g.height) continue;
        for (int dx = 0; dx < F; ++dx) {
          const int ix = x * g.stride + dx - pad;
          if (ix < 0 || ix >= g.height) continue;
          const std::uint64_t* px = in.data() + (static_cast<std::size_t>(iy) * g.height + ix) * cin;
          for (int co = 0; co < cout; ++co) {
            const std::uint64_t* k = kernel.data() + ((static_cast<std::size_t>(co) * F + dy) * F + dx) * cin;
            Acc& a = acc[co];
            for (int ci = 0; ci < cin; ++ci) a.add(k[ci], px[ci]);
          }
        }
      }
      std::uint64_t* o = out.data() + (static_cast<std::size_t>(y) * ho + x) * cout;
      for (int co = 0; co < cout; ++co) o[co] = acc[co].value();
    }
  }
}

}  // namespace

void conv2d_field(const mpcore::Field& field, const ConvGeom& g, std::span<const std::uint64_t> in,
                  std::span<const std::uint64_t> kernel, std::span<std::uint64_t> out, Exec exec) {
  if (in.size() != g.in_size() || kernel.size() != g.kernel_size() || out.size() != g.out_size())
    throw ShapeError("conv2d_field: buffer sizes do not match the geometry");
  if (exec == Exec::Serial)
    conv_field_serial(field, g, in, kernel, out);
  else
    conv_field_parallel(field, g, in, kernel, out);
}

void matvec_field(const mpcore::Field& field, std::size_t rows, std::size_t cols, std::span<const std::uint64_t> w,
                  std::span<const std::uint64_t> x, std::span<std::uint64_t> out, Exec exec) {
  if (w.size() != rows * cols || x.size() != cols || out.size() != rows)
    throw ShapeError("matvec_field: buffer sizes do not match " + std::to_string(rows) + "x" + std::to_string(cols));
  const auto n = static_cast<std::ptrdiff_t>(rows);
  if (exec == Exec::Serial) {
    for (std::ptrdiff_t o = 0; o < n; ++o) {
      std::uint64_t acc = 0;
      for (std::size_t i = 0; i < cols; ++i) acc = field.add(acc, field.mul(w[o * cols + i], x[i]));
      out[o] = acc;
    }
    return;
  }
  const std::size_t limit = field.accumulate_limit();
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t o = 0; o < n; ++o) {
    Acc a{field, limit};
    const std::uint64_t* row = w.data() + o * cols;
    for (std::size_t i = 0; i < cols; ++i) a.add(row[i], x[i]);
    out[o] = a.value();
  }
}

void sum_pool_field(const mpcore::Field& field, int height, int channels, int window, int stride,
                    std::span<const std::uint64_t> in, std::span<std::uint64_t> out) {
  const int ho = height / stride;
  if (in.size() != static_cast<std::size_t>(height) * height * channels ||
      out.size() != static_cast<std::size_t>(ho) * ho * channels)
    throw ShapeError("sum_pool_field: buffer sizes do not match the geometry");
  for (int y = 0; y < ho; ++y)
    for (int x = 0; x < ho; ++x)
      for (int c = 0; c < channels; ++c) {
        std::uint64_t s = 0;
        for (int dy = 0; dy < window; ++dy)
          for (int dx = 0; dx < window; ++dx)
            s = field.add(s, in[(static_cast<std::size_t>(y * stride + dy) * height + (x * stride + dx)) * channels + c]);
        out[(static_cast<std::size_t>(y) * ho + x) * channels + c] = s;
      }
}

}  // namespace ciphernet::kernels
