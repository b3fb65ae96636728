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

#include <filesystem>

#include "ciphernet/error.hpp"
#include "ciphernet/netgraph/counting.hpp"
#include "ciphernet/netgraph/spec_io.hpp"
#include "ciphernet/planner/planner.hpp"

using namespace ciphernet;
using namespace ciphernet::planner;

TEST(Synthesize, Cnet1Core) {
  const auto core = synthesize_core(6, 32, 2, 86016);
  const auto l = layout_of(core);
  EXPECT_EQ(l.heights, (std::vector<int>{32, 32, 16, 16, 8, 8}));
  EXPECT_EQ(l.channels, (std::vector<int>{14, 14, 56, 56, 224, 224}));
  EXPECT_EQ(netgraph::relu_count(core), 86016u);
  EXPECT_EQ(core.output_shape(), (netgraph::Shape{1, 10}));
  // Pools sit at the stage boundaries.
  EXPECT_NO_THROW(core.node(ids::stage_pool(2)));
  EXPECT_NO_THROW(core.node(ids::stage_pool(4)));
  // Canonical form survives a re-parse.
  EXPECT_EQ(netgraph::to_json(netgraph::parse_spec(netgraph::to_json(core))), netgraph::to_json(core));
}

TEST(Synthesize, WidthsAndErrors) {
  EXPECT_EQ(layout_of(synthesize_core(24, 32, 2, 1376256)).channels[0], 56);
  EXPECT_THROW(synthesize_core(6, 32, 2, 100), BudgetError);
  EXPECT_THROW(synthesize_core(7, 32, 2, 1u << 20), SpecError);
}

TEST(AttachSkips, EmptyPlanLeavesCore) {
  const auto core = synthesize_core(6, 32, 2, 86016);
  SkipPlan empty;
  empty.depth = 6;
  empty.skips.assign(6, {});
  EXPECT_EQ(netgraph::to_json(attach_skips(core, empty, SkipMode::Prune)), netgraph::to_json(core));
  SkipPlan wrong = empty;
  wrong.depth = 5;
  wrong.skips.resize(5);
  EXPECT_THROW(attach_skips(core, wrong, SkipMode::Prune), SpecError);
}

TEST(AttachSkips, PrunedModeKeepsReluCount) {
  const auto core = synthesize_core(6, 32, 2, 86016);
  const auto all = SkipSearchOracle::all_skip().propose(6);
  const auto g = attach_skips(core, all, SkipMode::Prune);
  EXPECT_EQ(netgraph::relu_count(g), netgraph::relu_count(core));
  EXPECT_GT(netgraph::param_count(g), netgraph::param_count(core));
}

TEST(AttachSkips, ShuffledModeAddsOnePostReshapeReluPerSkipLayer) {
  const auto core = synthesize_core(6, 32, 2, 86016);
  const auto g = attach_skips(core, SkipSearchOracle::all_skip().propose(6), SkipMode::Shuffle);
  // Layers 1..5 carry skips; each gets a post-reshape Relu of H^2 C = 14336.
  EXPECT_EQ(netgraph::relu_count(g), netgraph::relu_count(core) + 5u * 14336u);
}

TEST(Plan, SingleDepth) {
  PlanOptions o;
  o.depths = {6};
  o.budget = 86016;
  const auto r = plan_all(o);
  ASSERT_EQ(r.candidates.size(), 1u);
  EXPECT_EQ(r.chosen, 0u);
  const auto direct =
      attach_skips(synthesize_core(6, 32, 2, 86016), SkipSearchOracle::all_skip().propose(6), SkipMode::Prune);
  EXPECT_EQ(netgraph::to_json(plan(o)), netgraph::to_json(direct));
  EXPECT_EQ(r.best().relus, 86016u);
}

TEST(Plan, ThreeDepthsRespectBudget) {
  for (SkipMode mode : {SkipMode::Prune, SkipMode::Shuffle}) {
    PlanOptions o;
    o.depths = {6, 12, 24};
    o.budget = 344064;
    o.mode = mode;
    const auto r = plan_all(o);
    ASSERT_EQ(r.candidates.size(), 3u);
    for (const auto& c : r.candidates) {
      EXPECT_LE(c.relus, o.budget) << c.depth;
      EXPECT_EQ(c.relus, netgraph::relu_count(c.spec));
      EXPECT_EQ(c.params, netgraph::param_count(c.spec));
    }
  }
}

TEST(Plan, EvaluatorAndTieBreak) {
  PlanOptions o;
  o.depths = {12, 6};
  o.budget = 344064;
  o.evaluator = [](const netgraph::NetworkSpec&) { return 1.0; };
  const auto r = plan_all(o);
  EXPECT_EQ(r.best().depth, 6);
  o.evaluator = [](const netgraph::NetworkSpec& s) { return static_cast<double>(s.depth()); };
  EXPECT_EQ(plan_all(o).best().depth, 12);
}

TEST(Plan, DeterministicAndExternalRoundTrip) {
  PlanOptions o;
  o.depths = {6, 12};
  o.budget = 344064;
  o.oracle = SkipSearchOracle::random_sample(2, 17);
  const auto a = netgraph::to_json(plan(o));
  EXPECT_EQ(a, netgraph::to_json(plan(o)));

  const auto sp = SkipSearchOracle::random_sample(2, 17).propose(12);
  const auto path = std::filesystem::temp_directory_path() / "ciphernet_skip_plan.json";
  save_skip_plan(sp, path);
  EXPECT_EQ(load_skip_plan(path), sp);
  const auto ext = SkipSearchOracle::parse("file:" + path.string());
  EXPECT_EQ(ext.kind, OracleKind::External);
  const auto core = synthesize_core(12, 32, 2, 344064);
  EXPECT_EQ(netgraph::to_json(attach_skips(core, ext.propose(12), SkipMode::Prune)),
            netgraph::to_json(attach_skips(core, sp, SkipMode::Prune)));
  EXPECT_THROW(ext.propose(6), SpecError);
  std::filesystem::remove(path);
}

TEST(SkipOracle, RandomSampleIsValid) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto p = SkipSearchOracle::random_sample(3, seed).propose(12);
    EXPECT_NO_THROW(p.validate());
    ASSERT_EQ(p.skips.size(), 12u);
    for (int i = 0; i < 12; ++i) EXPECT_EQ(p.skips[i].size(), static_cast<std::size_t>(std::min(3, i)));
  }
  EXPECT_NE(SkipSearchOracle::random_sample(3, 1).propose(12), SkipSearchOracle::random_sample(3, 2).propose(12));
}

TEST(SkipOracle, ParseAndValidate) {
  const auto r = SkipSearchOracle::parse("random:4:99");
  EXPECT_EQ(r.kind, OracleKind::RandomSample);
  EXPECT_EQ(r.k, 4);
  EXPECT_EQ(r.seed, 99u);
  EXPECT_EQ(SkipSearchOracle::parse("allskip").kind, OracleKind::AllSkip);
  EXPECT_THROW(SkipSearchOracle::parse("enas"), SpecError);
  SkipPlan bad;
  bad.depth = 3;
  bad.skips = {{}, {0}, {1, 1}};
  EXPECT_THROW(bad.validate(), SpecError);
  bad.skips = {{}, {0}, {2}};
  EXPECT_THROW(bad.validate(), SpecError);
  bad.skips = {{}, {0}, {0, 1}};
  bad.filters = {3, 7, 3};
  EXPECT_THROW(bad.validate(), SpecError);
}

TEST(Plan, PrunedReluCountIndependentOfSkips) {
  const auto core = synthesize_core(12, 32, 2, 344064);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto g = attach_skips(core, SkipSearchOracle::random_sample(1 + seed % 4, seed).propose(12), SkipMode::Prune);
    EXPECT_EQ(netgraph::relu_count(g), netgraph::relu_count(core));
  }
}
