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

#include "ciphernet/planner/planner.hpp"

#include <exception>
#include <optional>

#include "ciphernet/balance/allocation.hpp"
#include "ciphernet/error.hpp"
#include "ciphernet/netgraph/counting.hpp"

namespace ciphernet::planner {

using netgraph::LayerKind;
using netgraph::LayerNode;
using netgraph::NetworkSpec;

std::string_view to_string(SkipMode m) {
  switch (m) {
    case SkipMode::Conventional: return "conventional";
    case SkipMode::Shuffle: return "shuffle";
    case SkipMode::Prune: return "prune";
  }
  return "?";
}

SkipMode parse_skip_mode(std::string_view s) {
  if (s == "conventional") return SkipMode::Conventional;
  if (s == "shuffle" || s == "shuffled") return SkipMode::Shuffle;
  if (s == "prune" || s == "pruned") return SkipMode::Prune;
  throw SpecError("unknown skip mode '" + std::string(s) + "' (conventional|shuffle|prune)");
}

namespace {

bool is_pow2(int v) { return v > 0 && (v & (v - 1)) == 0; }

LayerNode make(int id, LayerKind kind, std::vector<int> inputs, int filter = 0, int out_channels = 0, int stride = 1) {
  LayerNode n;
  n.id = id;
  n.kind = kind;
  n.inputs = std::move(inputs);
  n.filter = filter;
  n.out_channels = out_channels;
  n.stride = stride;
  return n;
}

}  // namespace

NetworkSpec build_network(const CoreLayout& L, const std::vector<std::vector<int>>& skips, SkipMode mode) {
  const int d = L.depth;
  if (d < 1 || d > ids::kMaxDepth) throw SpecError("planner depth must be in [1, " + std::to_string(ids::kMaxDepth) + "]");
  const auto ud = static_cast<std::size_t>(d);
  if (L.heights.size() != ud || L.channels.size() != ud || L.filters.size() != ud)
    throw SpecError("layout vectors must have one entry per layer");
  if (!skips.empty() && skips.size() != ud) throw SpecError("skip sets must have one entry per layer");

  std::vector<LayerNode> nodes;
  std::vector<int> out(ud);
  int prev = netgraph::kNetworkInput;
  int prev_h = L.input.height;
  bool any_skip = false;
  for (int i = 0; i < d; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    int in = prev;
    if (L.heights[ui] != prev_h) {
      if (prev_h != L.heights[ui] * L.alpha) throw SpecError("layout resolutions must drop by alpha per stage");
      nodes.push_back(make(ids::stage_pool(i), LayerKind::Pool, {prev}, L.alpha, 0, L.alpha));
      in = ids::stage_pool(i);
    }
    nodes.push_back(make(ids::conv(i), LayerKind::Conv, {in}, L.filters[ui], L.channels[ui]));

    const std::vector<int> none;
    const std::vector<int>& s = skips.empty() ? none : skips[ui];
    if (s.empty()) {
      nodes.push_back(make(ids::relu(i), LayerKind::Relu, {ids::conv(i)}));
      out[ui] = ids::relu(i);
    } else {
      any_skip = true;
      std::vector<int> fwd;
      for (int k : s) {
        const auto uk = static_cast<std::size_t>(k);
        int src = mode == SkipMode::Conventional ? ids::conv(k) : ids::relu(k);
        if (L.heights[uk] != L.heights[ui]) {
          const int ratio = L.heights[uk] / L.heights[ui];
          nodes.push_back(make(ids::skip_pool(i, k), LayerKind::Pool, {src}, 1, 0, ratio));
          src = ids::skip_pool(i, k);
        }
        fwd.push_back(src);
      }
      std::vector<int> cat{ids::conv(i)};
      if (mode == SkipMode::Conventional) {
        cat.insert(cat.end(), fwd.begin(), fwd.end());
        nodes.push_back(make(ids::relu(i), LayerKind::Relu, cat));
        nodes.push_back(make(ids::reshape(i), LayerKind::ConcatReshape, {ids::relu(i)}, 1, L.channels[ui]));
      } else {
        nodes.push_back(make(ids::relu(i), LayerKind::Relu, cat));
        std::vector<int> reshape_in{ids::relu(i)};
        reshape_in.insert(reshape_in.end(), fwd.begin(), fwd.end());
        nodes.push_back(make(ids::reshape(i), LayerKind::ConcatReshape, reshape_in, 1, L.channels[ui]));
      }
      if (mode == SkipMode::Prune) {
        out[ui] = ids::reshape(i);
      } else {
        nodes.push_back(make(ids::post_relu(i), LayerKind::Relu, {ids::reshape(i)}));
        out[ui] = ids::post_relu(i);
      }
    }
    prev = out[ui];
    prev_h = L.heights[ui];
  }
  if (L.classes > 0) {
    int head_in = prev;
    if (is_pow2(prev_h) && prev_h > 1) {
      nodes.push_back(make(ids::head_pool(d), LayerKind::Pool, {prev}, prev_h, 0, prev_h));
      head_in = ids::head_pool(d);
    }
    nodes.push_back(make(ids::head_dense(d), LayerKind::Dense, {head_in}, 0, L.classes));
  }
  std::vector<std::vector<int>> spec_skips;
  if (any_skip) spec_skips = skips;
  return NetworkSpec(d, L.input, L.alpha, std::move(nodes), std::move(spec_skips));
}

CoreLayout layout_of(const NetworkSpec& spec) {
  CoreLayout L;
  L.depth = spec.depth();
  L.input = spec.input_shape();
  L.alpha = spec.alpha();
  if (L.depth < 1 || L.depth > ids::kMaxDepth) throw SpecError("not a planner-built network: bad depth");
  for (int i = 0; i < L.depth; ++i) {
    if (!spec.contains(ids::conv(i)) || spec.node(ids::conv(i)).kind != LayerKind::Conv)
      throw SpecError(ids::conv(i), "not a planner-built network: missing core conv");
    const LayerNode& c = spec.node(ids::conv(i));
    L.heights.push_back(spec.shape_of(c.id).height);
    L.channels.push_back(c.out_channels);
    L.filters.push_back(c.filter);
  }
  const int head = ids::head_dense(L.depth);
  L.classes = spec.contains(head) && spec.node(head).kind == LayerKind::Dense ? spec.node(head).out_channels : 0;
  return L;
}

namespace {

CoreLayout relu_balanced_layout(int depth, int h0, int alpha, int c1, const CoreOptions& opt) {
  const std::uint64_t quantum = static_cast<std::uint64_t>(depth) * static_cast<std::uint64_t>(h0) * static_cast<std::uint64_t>(h0);
  const auto alloc = balance::allocate(balance::Rule::ReluBalanced, depth, h0, alpha,
                                       quantum * static_cast<std::uint64_t>(c1));
  CoreLayout L;
  L.depth = depth;
  L.input = {h0, opt.input_channels};
  L.alpha = alpha;
  L.classes = opt.classes;
  for (const auto& l : alloc.layers) {
    L.heights.push_back(l.height);
    L.channels.push_back(l.channels);
  }
  if (opt.filters.empty()) {
    L.filters.assign(static_cast<std::size_t>(depth), 3);
  } else {
    if (static_cast<int>(opt.filters.size()) != depth) throw SpecError("core filters must have one entry per layer");
    L.filters = opt.filters;
  }
  return L;
}

int first_width(int depth, int h0, std::uint64_t budget) {
  const std::uint64_t quantum = static_cast<std::uint64_t>(depth) * static_cast<std::uint64_t>(h0) * static_cast<std::uint64_t>(h0);
  const std::uint64_t c1 = budget / quantum;
  if (c1 < 1)
    throw BudgetError("budget " + std::to_string(budget) + " gives fewer than one channel at depth " +
                      std::to_string(depth));
  return static_cast<int>(c1);
}

}  // namespace

NetworkSpec synthesize_core(int depth, int h0, int alpha, std::uint64_t budget, const CoreOptions& options) {
  if (depth < 3 || depth % 3 != 0) throw SpecError("core depth must be a positive multiple of 3");
  return build_network(relu_balanced_layout(depth, h0, alpha, first_width(depth, h0, budget), options));
}

NetworkSpec attach_skips(const NetworkSpec& core, const SkipPlan& plan, SkipMode mode) {
  if (plan.depth != core.depth())
    throw SpecError("skip plan depth " + std::to_string(plan.depth) + " does not match core depth " +
                    std::to_string(core.depth()));
  plan.validate();
  CoreLayout L = layout_of(core);
  if (!plan.filters.empty()) L.filters = plan.filters;
  return build_network(L, plan.empty() ? std::vector<std::vector<int>>{} : plan.skips, mode);
}

double param_count_proxy(const NetworkSpec& spec) { return static_cast<double>(netgraph::param_count(spec)); }

PlanResult plan_all(const PlanOptions& o) {
  if (o.depths.empty()) throw SpecError("plan needs at least one depth");
  const std::size_t n = o.depths.size();
  std::vector<std::optional<Candidate>> built(n);
  std::vector<std::exception_ptr> errors(n);

  // Candidate construction is independent per depth.
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t t = 0; t < static_cast<std::int64_t>(n); ++t) {
    const auto ut = static_cast<std::size_t>(t);
    try {
      const int d = o.depths[ut];
      if (d < 3 || d % 3 != 0) throw SpecError("core depth must be a positive multiple of 3");
      const SkipPlan sp = o.oracle.propose(d);
      CoreOptions copt;
      copt.input_channels = o.input_channels;
      copt.classes = o.classes;
      for (int c1 = first_width(d, o.h0, o.budget); c1 >= 1; --c1) {
        const NetworkSpec core = build_network(relu_balanced_layout(d, o.h0, o.alpha, c1, copt));
        NetworkSpec spec = attach_skips(core, sp, o.mode);
        const std::uint64_t relus = netgraph::relu_count(spec);
        if (relus <= o.budget) {
          built[ut].emplace(Candidate{d, c1, std::move(spec), 0.0, relus, 0});
          break;
        }
      }
      if (!built[ut]) throw BudgetError("no width fits the budget at depth " + std::to_string(d));
    } catch (...) {
      errors[ut] = std::current_exception();
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  PlanResult r;
  const ModelEvaluator eval = o.evaluator ? o.evaluator : ModelEvaluator(param_count_proxy);
  for (auto& c : built) {
    c->params = netgraph::param_count(c->spec);
    c->score = eval(c->spec);
    r.candidates.push_back(std::move(*c));
  }
  for (std::size_t i = 1; i < r.candidates.size(); ++i) {
    const Candidate& a = r.candidates[i];
    const Candidate& b = r.candidates[r.chosen];
    const bool better = a.score > b.score ||
                        (a.score == b.score && (a.depth < b.depth || (a.depth == b.depth && a.params < b.params)));
    if (better) r.chosen = i;
  }
  return r;
}

NetworkSpec plan(const PlanOptions& options) { return plan_all(options).best().spec; }

}  // namespace ciphernet::planner
