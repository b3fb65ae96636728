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

#include <gtest/gtest.h>

#include <cmath>

#include "ciphernet/crypto/prg.hpp"
#include "ciphernet/kernels/conv_kernels.hpp"
#include "ciphernet/kernels/field_kernels.hpp"
#include "ciphernet/mpcore/field.hpp"

using namespace ciphernet;
using kernels::ConvGeom;
using kernels::Exec;

namespace {

// Direct definition, strided "same" padding.
std::vector<double> conv_oracle(const ConvGeom& g, const std::vector<float>& in, const std::vector<float>& k,
                                const std::vector<float>& b) {
  const int ho = g.out_height(), pad = g.filter / 2;
  std::vector<double> out(g.out_size());
  for (int y = 0; y < ho; ++y)
    for (int x = 0; x < ho; ++x)
      for (int co = 0; co < g.out_channels; ++co) {
        double acc = b.empty() ? 0.0 : b[static_cast<std::size_t>(co)];
        for (int dy = 0; dy < g.filter; ++dy)
          for (int dx = 0; dx < g.filter; ++dx) {
            const int iy = y * g.stride + dy - pad, ix = x * g.stride + dx - pad;
            if (iy < 0 || ix < 0 || iy >= g.height || ix >= g.height) continue;
            for (int ci = 0; ci < g.in_channels; ++ci)
              acc += static_cast<double>(k[static_cast<std::size_t>(((co * g.filter + dy) * g.filter + dx) * g.in_channels + ci)]) *
                     in[static_cast<std::size_t>((iy * g.height + ix) * g.in_channels + ci)];
          }
        out[static_cast<std::size_t>((y * ho + x) * g.out_channels + co)] = acc;
      }
  return out;
}

}  // namespace

class ConvKernel : public ::testing::TestWithParam<ConvGeom> {};

TEST_P(ConvKernel, SerialAndParallelMatchOracle) {
  const ConvGeom g = GetParam();
  crypto::Prg prg(11);
  std::vector<float> in(g.in_size()), k(g.kernel_size()), b(static_cast<std::size_t>(g.out_channels));
  for (auto& v : in) v = static_cast<float>(prg.uniform_real(-1, 1));
  for (auto& v : k) v = static_cast<float>(prg.uniform_real(-1, 1));
  for (auto& v : b) v = static_cast<float>(prg.uniform_real(-1, 1));
  std::vector<float> s(g.out_size()), p(g.out_size());
  kernels::conv2d(g, in, k, b, s, Exec::Serial);
  kernels::conv2d(g, in, k, b, p, Exec::Parallel);
  const auto ref = conv_oracle(g, in, k, b);
  for (std::size_t i = 0; i < ref.size(); ++i) {
    ASSERT_NEAR(s[i], ref[i], 1e-4);
    ASSERT_NEAR(p[i], ref[i], 1e-4);
  }
}

TEST_P(ConvKernel, FieldSerialAndParallelAgreeWithFloatOnSmallIntegers) {
  const ConvGeom g = GetParam();
  const mpcore::Field f = mpcore::Field::mersenne31();
  crypto::Prg prg(12);
  // Small signed integers: exact in float and in the field.
  std::vector<float> in(g.in_size()), k(g.kernel_size());
  std::vector<std::uint64_t> qin(in.size()), qk(k.size());
  for (std::size_t i = 0; i < in.size(); ++i) {
    const auto v = static_cast<std::int64_t>(prg.uniform(21)) - 10;
    in[i] = static_cast<float>(v);
    qin[i] = f.from_signed(v);
  }
  for (std::size_t i = 0; i < k.size(); ++i) {
    const auto v = static_cast<std::int64_t>(prg.uniform(21)) - 10;
    k[i] = static_cast<float>(v);
    qk[i] = f.from_signed(v);
  }
  std::vector<std::uint64_t> s(g.out_size()), p(g.out_size());
  kernels::conv2d_field(f, g, qin, qk, s, Exec::Serial);
  kernels::conv2d_field(f, g, qin, qk, p, Exec::Parallel);
  EXPECT_EQ(s, p);
  const auto ref = conv_oracle(g, in, k, {});
  for (std::size_t i = 0; i < ref.size(); ++i) ASSERT_EQ(f.to_signed(s[i]), static_cast<std::int64_t>(ref[i]));
}

INSTANTIATE_TEST_SUITE_P(Geometries, ConvKernel,
                         ::testing::Values(ConvGeom{8, 3, 4, 3, 1}, ConvGeom{8, 2, 5, 5, 1}, ConvGeom{4, 1, 1, 1, 1},
                                           ConvGeom{8, 3, 2, 3, 2}, ConvGeom{16, 8, 8, 3, 1}));

TEST(FieldKernels, MatvecLazyReductionOnFullRangeValues) {
  const mpcore::Field f = mpcore::Field::mersenne61();
  crypto::Prg prg(13);
  const std::size_t rows = 9, cols = 300;
  std::vector<std::uint64_t> w(rows * cols), x(cols), s(rows), p(rows);
  for (auto& v : w) v = prg.uniform(f.modulus());
  for (auto& v : x) v = prg.uniform(f.modulus());
  kernels::matvec_field(f, rows, cols, w, x, s, Exec::Serial);
  kernels::matvec_field(f, rows, cols, w, x, p, Exec::Parallel);
  EXPECT_EQ(s, p);
  for (std::size_t o = 0; o < rows; ++o) {
    unsigned __int128 acc = 0;
    for (std::size_t i = 0; i < cols; ++i)
      acc = (acc + static_cast<unsigned __int128>(w[o * cols + i]) * x[i] % f.modulus()) % f.modulus();
    EXPECT_EQ(s[o], static_cast<std::uint64_t>(acc));
  }
}

TEST(FieldKernels, SumPoolAndDecimation) {
  const mpcore::Field f(251);
  // 4x4x1 input 0..15.
  std::vector<std::uint64_t> in(16);
  for (std::size_t i = 0; i < 16; ++i) in[i] = i;
  std::vector<std::uint64_t> out(4);
  kernels::sum_pool_field(f, 4, 1, 2, 2, in, out);
  EXPECT_EQ(out, (std::vector<std::uint64_t>{0 + 1 + 4 + 5, 2 + 3 + 6 + 7, 8 + 9 + 12 + 13, 10 + 11 + 14 + 15}));
  kernels::sum_pool_field(f, 4, 1, 1, 2, in, out);
  EXPECT_EQ(out, (std::vector<std::uint64_t>{0, 2, 8, 10}));
}

TEST(FloatKernels, AvgPoolAndMatvec) {
  std::vector<float> in(16);
  for (std::size_t i = 0; i < 16; ++i) in[i] = static_cast<float>(i);
  std::vector<float> out(4);
  kernels::avg_pool(4, 1, 2, 2, in, out);
  EXPECT_FLOAT_EQ(out[0], 2.5f);
  EXPECT_FLOAT_EQ(out[3], 12.5f);
  std::vector<float> w{1, 2, 3, 4, 5, 6}, x{1, 1, 1}, b{0.5f, -0.5f}, y(2);
  kernels::matvec(2, 3, w, x, b, y, Exec::Serial);
  EXPECT_FLOAT_EQ(y[0], 6.5f);
  EXPECT_FLOAT_EQ(y[1], 14.5f);
}
