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

#include "ciphernet/balance/capacity_oracle.hpp"

#include <cmath>

#include "ciphernet/balance/allocation.hpp"
#include "ciphernet/error.hpp"

namespace ciphernet::balance {

namespace {

constexpr double kMaxPoints = 1e7;

void decode_point(std::uint64_t idx, int c_max, std::vector<int>& c) {
  // Most significant digit first so index order is lexicographic order.
  const auto base = static_cast<std::uint64_t>(c_max);
  for (std::size_t i = c.size(); i-- > 0;) {
    c[i] = static_cast<int>(idx % base) + 1;
    idx /= base;
  }
}

struct Best {
  double obj = -1.0;
  std::uint64_t idx = 0;
  std::uint64_t feasible = 0;
};

}  // namespace

CapacityResult capacity_oracle(const std::vector<int>& resolutions, int filter, std::uint64_t budget, int c_max,
                               bool keep_landscape) {
  const std::size_t d = resolutions.size();
  if (d == 0) throw SpecError("capacity oracle needs at least one layer");
  if (c_max < 1) throw SpecError("C_max must be positive");
  if (std::pow(static_cast<double>(c_max) + 1.0, static_cast<double>(d)) > kMaxPoints)
    throw BudgetError("search space (C_max+1)^D exceeds 1e7");

  std::uint64_t total = 1;
  for (std::size_t i = 0; i < d; ++i) total *= static_cast<std::uint64_t>(c_max);
  const double f2 = static_cast<double>(filter) * filter;

  auto eval = [&](const std::vector<int>& c, double& obj) {
    std::uint64_t relus = 0;
    obj = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      const auto h = static_cast<std::uint64_t>(resolutions[i]);
      relus += h * h * static_cast<std::uint64_t>(c[i]);
      obj += f2 * c[i] * c[i];
    }
    return relus;
  };

  Best global;
#pragma omp parallel
  {
    Best local;
    std::vector<int> c(d);
#pragma omp for schedule(static)
    for (std::int64_t s = 0; s < static_cast<std::int64_t>(total); ++s) {
      const auto idx = static_cast<std::uint64_t>(s);
      decode_point(idx, c_max, c);
      double obj = 0.0;
      if (eval(c, obj) > budget) continue;
      ++local.feasible;
      if (obj > local.obj || (obj == local.obj && idx < local.idx)) {
        local.obj = obj;
        local.idx = idx;
      }
    }
#pragma omp critical
    {
      global.feasible += local.feasible;
      if (local.obj > global.obj || (local.obj == global.obj && local.obj >= 0 && local.idx < global.idx)) {
        global.obj = local.obj;
        global.idx = local.idx;
      }
    }
  }
  if (global.obj < 0) throw BudgetError("no allocation in [1, C_max]^D fits the budget");

  CapacityResult r;
  r.best.resize(d);
  decode_point(global.idx, c_max, r.best);
  r.best_relus = eval(r.best, r.best_objective);
  r.feasible_points = global.feasible;
  if (keep_landscape) {
    std::vector<int> c(d);
    for (std::uint64_t idx = 0; idx < total; ++idx) {
      decode_point(idx, c_max, c);
      double obj = 0.0;
      const std::uint64_t relus = eval(c, obj);
      if (relus <= budget) r.landscape.push_back({c, obj, relus});
    }
  }
  return r;
}

CapacityResult capacity_oracle(int depth, int h0, int alpha, int filter, std::uint64_t budget, int c_max,
                               bool keep_landscape) {
  if (depth < 1) throw SpecError("depth must be positive");
  std::vector<int> starts;
  if (depth % 3 == 0) starts = default_stage_starts(depth);
  const std::vector<int> stage = stage_of_layers(depth, starts);
  std::vector<int> res;
  int h = h0;
  for (int i = 0; i < depth; ++i) {
    if (i > 0 && stage[i] != stage[i - 1]) h /= alpha;
    if (h < 1) throw SpecError("resolution underflow");
    res.push_back(h);
  }
  return capacity_oracle(res, filter, budget, c_max, keep_landscape);
}

}  // namespace ciphernet::balance
