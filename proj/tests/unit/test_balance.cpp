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
#ifdef CIPHERNET_HAVE_OPENMP
#include <omp.h>
#endif

#include "ciphernet/balance/allocation.hpp"
#include "ciphernet/balance/capacity_oracle.hpp"
#include "ciphernet/balance/wide_resnet.hpp"
#include "ciphernet/error.hpp"

using namespace ciphernet;
using namespace ciphernet::balance;

namespace {

std::vector<int> channels(const ChannelAllocation& a) {
  std::vector<int> c;
  for (const auto& l : a.layers) c.push_back(l.channels);
  return c;
}

}  // namespace

TEST(Allocate, ReluBalancedCnet1Budget) {
  const auto a = allocate(Rule::ReluBalanced, 6, 32, 2, 86016);
  EXPECT_EQ(channels(a), (std::vector<int>{14, 14, 56, 56, 224, 224}));
  EXPECT_EQ(a.relus_used(), 86016u);
  for (const auto& l : a.layers) EXPECT_EQ(l.height * l.height * l.channels, 14336);
}

TEST(Allocate, ReluBalancedFirstWidth) {
  EXPECT_EQ(allocate(Rule::ReluBalanced, 12, 32, 2, 344064).layers[0].channels, 28);
  EXPECT_EQ(allocate(Rule::ReluBalanced, 24, 32, 2, 1376256).layers[0].channels, 56);
  // Slack is left unused rather than redistributed.
  const auto a = allocate(Rule::ReluBalanced, 6, 32, 2, 86016 + 6000);
  EXPECT_EQ(a.layers[0].channels, 14);
}

TEST(Allocate, ChannelBalancedTinyCase) {
  const auto a = allocate(Rule::ChannelBalanced, 3, 8, 2, 84);
  EXPECT_EQ(channels(a), (std::vector<int>{1, 1, 1}));
  EXPECT_EQ(a.relus_used(), 84u);
  EXPECT_THROW(allocate(Rule::ChannelBalanced, 3, 8, 2, 83), BudgetError);
  // (2,2,2) would need 168.
  EXPECT_EQ(allocate(Rule::ChannelBalanced, 3, 8, 2, 167).layers[0].channels, 1);
}

TEST(Allocate, FlopBalancedDoublesPerStage) {
  const auto a = allocate(Rule::FlopBalanced, 6, 32, 2, 86016);
  const auto c = channels(a);
  EXPECT_EQ(c[2], 2 * c[0]);
  EXPECT_EQ(c[4], 4 * c[0]);
  EXPECT_LE(a.relus_used(), 86016u);
  EXPECT_GT(a.relus_used() + a.channel_quantum(), 86016u);
}

TEST(Allocate, Errors) {
  EXPECT_THROW(allocate(Rule::ReluBalanced, 6, 32, 2, 100), BudgetError);
  EXPECT_THROW(default_stage_starts(7), SpecError);
  EXPECT_EQ(parse_rule("flop"), Rule::FlopBalanced);
  EXPECT_THROW(parse_rule("wide"), SpecError);
}

TEST(Allocate, CustomStages) {
  const auto a = allocate(Rule::ReluBalanced, 5, 16, 2, 5 * 256 * 3, {1, 4});
  EXPECT_EQ(channels(a), (std::vector<int>{3, 12, 12, 12, 48}));
}

TEST(Stationarity, ReluBalancedPassesFlopBalancedFails) {
  for (int d : {3, 6, 12, 24}) {
    const std::uint64_t budget = static_cast<std::uint64_t>(d) * 1024 * 16 + 77;
    EXPECT_TRUE(stationarity_check(allocate(Rule::ReluBalanced, d, 32, 2, budget), 3)) << d;
    EXPECT_FALSE(stationarity_check(allocate(Rule::FlopBalanced, d, 32, 2, budget), 3)) << d;
  }
  const auto one = allocate(Rule::ReluBalanced, 1, 8, 2, 64 * 5, {});
  EXPECT_TRUE(stationarity_check(one, 3));
}

TEST(Stationarity, IndependentLambda) {
  // Solve lambda from layer 0 and check every layer within half a channel.
  const auto a = allocate(Rule::ReluBalanced, 12, 32, 2, 344064);
  const double f2 = 9.0;
  const double lambda = a.layers[0].channels * 2.0 * f2 / (32.0 * 32.0);
  for (const auto& l : a.layers) {
    const double ideal = lambda * 32.0 * 32.0 * std::pow(2.0, 2 * l.stage) / (2.0 * f2);
    EXPECT_LE(std::abs(l.channels - ideal), 0.5);
  }
  EXPECT_NEAR(a.lagrange_lambda, lambda, 1e-12);
}

TEST(Stationarity, LooseBudgetFails) {
  auto a = allocate(Rule::ReluBalanced, 6, 32, 2, 86016);
  a.budget = 86016 * 2;
  EXPECT_FALSE(stationarity_check(a, 3));
}

TEST(CapacityOracle, SingleLayer) {
  const auto r = capacity_oracle(1, 32, 2, 3, 5000, 10);
  EXPECT_EQ(r.best, std::vector<int>{4});
}

TEST(CapacityOracle, TwoLayerBruteForce) {
  const auto r = capacity_oracle(std::vector<int>{2, 1}, 1, 12, 12, true);
  int best0 = 0, best1 = 0;
  double best = -1;
  std::uint64_t feasible = 0;
  for (int a = 1; a <= 12; ++a)
    for (int b = 1; b <= 12; ++b) {
      if (4 * a + b > 12) continue;
      ++feasible;
      const double obj = a * a + b * b;
      if (obj > best) best = obj, best0 = a, best1 = b;
    }
  EXPECT_EQ(r.best, (std::vector<int>{best0, best1}));
  EXPECT_DOUBLE_EQ(r.best_objective, best);
  EXPECT_EQ(r.feasible_points, feasible);
  EXPECT_EQ(r.landscape.size(), feasible);
}

TEST(CapacityOracle, EqualResolutionIsSymmetric) {
  const auto r = capacity_oracle(std::vector<int>{4, 4}, 3, 16 * 10, 12, true);
  EXPECT_EQ(r.best, (std::vector<int>{1, 9}));
  std::map<std::pair<int, int>, double> obj;
  for (const auto& p : r.landscape) obj[{p.channels[0], p.channels[1]}] = p.objective;
  for (const auto& [k, v] : obj) {
    const auto it = obj.find({k.second, k.first});
    ASSERT_NE(it, obj.end());
    EXPECT_DOUBLE_EQ(it->second, v);
  }
}

TEST(CapacityOracle, DeterministicAcrossThreadCounts) {
  const auto a = capacity_oracle(std::vector<int>{4, 4, 2, 2}, 3, 200, 20);
#ifdef CIPHERNET_HAVE_OPENMP
  const int saved = omp_get_max_threads();
  omp_set_num_threads(4);
  const auto b = capacity_oracle(std::vector<int>{4, 4, 2, 2}, 3, 200, 20);
  omp_set_num_threads(1);
  const auto c = capacity_oracle(std::vector<int>{4, 4, 2, 2}, 3, 200, 20);
  omp_set_num_threads(saved);
  EXPECT_EQ(a.best, b.best);
  EXPECT_EQ(a.best, c.best);
#endif
  EXPECT_LE(a.best_relus, 200u);
}

TEST(CapacityOracle, SearchSpaceLimit) {
  EXPECT_THROW(capacity_oracle(8, 32, 2, 3, 1u << 30, 10), BudgetError);
  EXPECT_THROW(capacity_oracle(std::vector<int>{32}, 3, 10, 5), BudgetError);
}

TEST(ParamOrdering, ReluOverFlopOverChannel) {
  for (int d : {6, 12, 24}) {
    const std::uint64_t budget = static_cast<std::uint64_t>(d) * 1024 * 14;
    auto params = [&](Rule r) {
      const auto a = allocate(r, d, 32, 2, budget);
      double p = 0;
      for (std::size_t i = 1; i < a.layers.size(); ++i) p += a.layers[i - 1].channels * a.layers[i].channels;
      return p;
    };
    EXPECT_GT(params(Rule::ReluBalanced), params(Rule::FlopBalanced)) << d;
    EXPECT_GT(params(Rule::FlopBalanced), params(Rule::ChannelBalanced)) << d;
  }
}

struct WrnRow {
  int depth, k;
  double relus, flop_params, relu_params;
};

class WrnTable : public ::testing::TestWithParam<WrnRow> {};

TEST_P(WrnTable, ReluBalancedRescaling) {
  const auto row = GetParam();
  const auto flop = wrn_counts(wrn_flop_balanced(row.depth, row.k));
  EXPECT_NEAR(flop.relus, row.relus, 0.1 * row.relus);
  EXPECT_NEAR(flop.params, row.flop_params, 0.1 * row.flop_params);
  const auto rb = wrn_relu_balanced(row.depth, flop.relus);
  const auto counts = wrn_counts(rb);
  EXPECT_LE(counts.relus, flop.relus);
  EXPECT_EQ(rb.widths[1], 4 * rb.widths[0]);
  EXPECT_EQ(rb.widths[2], 16 * rb.widths[0]);
  EXPECT_NEAR(counts.params, row.relu_params, 0.1 * row.relu_params);
  EXPECT_GT(counts.params, flop.params);
}

INSTANTIATE_TEST_SUITE_P(Published, WrnTable,
                         ::testing::Values(WrnRow{16, 2, 245e3, 703e3, 2.6e6}, WrnRow{16, 4, 475e3, 2.8e6, 10.4e6},
                                           WrnRow{16, 8, 933e3, 11.0e6, 42e6}, WrnRow{40, 4, 1392e3, 8.9e6, 36e6},
                                           WrnRow{28, 10, 2310e3, 36.5e6, 144e6}));
