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

// Serial reference kernels against their OpenMP variants. Prints one CSV
// row per kernel and shape; "match" confirms identical outputs.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <vector>

#include "ciphernet/crypto/prg.hpp"
#include "ciphernet/kernels/conv_kernels.hpp"
#include "ciphernet/kernels/field_kernels.hpp"
#include "ciphernet/mpcore/field.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace ciphernet;
using kernels::Exec;

namespace {

double best_ms(int reps, const std::function<void()>& fn) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  return best;
}

void row(const char* kernel, const std::string& shape, double serial, double parallel, bool match) {
  std::printf("%s,%s,%.3f,%.3f,%.2f,%s\n", kernel, shape.c_str(), serial, parallel, serial / parallel,
              match ? "yes" : "NO");
}

}  // namespace

int main(int argc, char** argv) {
  const int reps = argc > 1 ? std::atoi(argv[1]) : 5;
  int threads = 1;
#ifdef _OPENMP
  threads = omp_get_max_threads();
#endif
  std::printf("# threads=%d reps=%d\n", threads, reps);
  std::printf("kernel,shape,serial_ms,parallel_ms,speedup,match\n");

  crypto::Prg prg(42);
  const mpcore::Field field = mpcore::Field::mersenne31();
  const kernels::ConvGeom geoms[] = {{32, 16, 16, 3, 1}, {16, 64, 64, 3, 1}, {64, 8, 8, 3, 1}, {8, 128, 128, 5, 1}};

  for (const auto& g : geoms) {
    const std::string shape = std::to_string(g.height) + "x" + std::to_string(g.in_channels) + "->" +
                              std::to_string(g.out_channels) + " f" + std::to_string(g.filter);
    std::vector<float> in(g.in_size()), k(g.kernel_size()), b(static_cast<std::size_t>(g.out_channels));
    for (auto& v : in) v = static_cast<float>(prg.uniform_real(-1, 1));
    for (auto& v : k) v = static_cast<float>(prg.uniform_real(-1, 1));
    for (auto& v : b) v = static_cast<float>(prg.uniform_real(-1, 1));
    std::vector<float> o1(g.out_size()), o2(g.out_size());
    const double s = best_ms(reps, [&] { kernels::conv2d(g, in, k, b, o1, Exec::Serial); });
    const double p = best_ms(reps, [&] { kernels::conv2d(g, in, k, b, o2, Exec::Parallel); });
    bool match = true;
    for (std::size_t i = 0; i < o1.size(); ++i) match = match && std::abs(o1[i] - o2[i]) <= 1e-4f * (1 + std::abs(o1[i]));
    row("conv2d", shape, s, p, match);

    std::vector<std::uint64_t> qin(g.in_size()), qk(g.kernel_size());
    for (auto& v : qin) v = prg.uniform(field.modulus());
    for (auto& v : qk) v = prg.uniform(field.modulus());
    std::vector<std::uint64_t> q1(g.out_size()), q2(g.out_size());
    const double fs = best_ms(reps, [&] { kernels::conv2d_field(field, g, qin, qk, q1, Exec::Serial); });
    const double fp = best_ms(reps, [&] { kernels::conv2d_field(field, g, qin, qk, q2, Exec::Parallel); });
    row("conv2d_field", shape, fs, fp, q1 == q2);
  }

  for (std::size_t n : {256u, 1024u, 4096u}) {
    const std::string shape = std::to_string(n) + "x" + std::to_string(n);
    std::vector<std::uint64_t> w(n * n), x(n), y1(n), y2(n);
    for (auto& v : w) v = prg.uniform(field.modulus());
    for (auto& v : x) v = prg.uniform(field.modulus());
    const double s = best_ms(reps, [&] { kernels::matvec_field(field, n, n, w, x, y1, Exec::Serial); });
    const double p = best_ms(reps, [&] { kernels::matvec_field(field, n, n, w, x, y2, Exec::Parallel); });
    row("matvec_field", shape, s, p, y1 == y2);

    std::vector<float> wf(n * n), xf(n), f1(n), f2(n);
    for (auto& v : wf) v = static_cast<float>(prg.uniform_real(-1, 1));
    for (auto& v : xf) v = static_cast<float>(prg.uniform_real(-1, 1));
    const double sf = best_ms(reps, [&] { kernels::matvec(n, n, wf, xf, {}, f1, Exec::Serial); });
    const double pf = best_ms(reps, [&] { kernels::matvec(n, n, wf, xf, {}, f2, Exec::Parallel); });
    bool match = true;
    for (std::size_t i = 0; i < n; ++i) match = match && std::abs(f1[i] - f2[i]) <= 1e-3f * (1 + std::abs(f1[i]));
    row("matvec", shape, sf, pf, match);
  }
  return 0;
}
