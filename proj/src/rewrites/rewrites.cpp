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

#include "ciphernet/rewrites/rewrites.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "ciphernet/crypto/prg.hpp"
#include "ciphernet/error.hpp"
#include "ciphernet/netgraph/counting.hpp"
#include "ciphernet/netgraph/infer.hpp"
#include "ciphernet/netgraph/spec_io.hpp"
#include "ciphernet/netgraph/weights.hpp"

namespace ciphernet::rewrites {

using netgraph::LayerKind;
using netgraph::LayerNode;
using netgraph::NetworkSpec;

namespace {

RewriteReport make_report(const NetworkSpec& before, const NetworkSpec& after, bool equivalent) {
  RewriteReport r;
  r.relus_before = netgraph::relu_count(before);
  r.relus_after = netgraph::relu_count(after);
  r.reduction_ratio = r.relus_after == 0 ? 1.0 : static_cast<double>(r.relus_before) / static_cast<double>(r.relus_after);
  r.functionally_equivalent = equivalent;
  return r;
}

bool has_multi(const NetworkSpec& s, LayerKind kind) {
  return std::any_of(s.nodes().begin(), s.nodes().end(),
                     [&](const LayerNode& n) { return n.kind == kind && n.inputs.size() > 1; });
}

NetworkSpec rebuild(const NetworkSpec& like, const std::map<int, LayerNode>& nodes) {
  std::vector<LayerNode> v;
  v.reserve(nodes.size());
  for (const auto& [id, n] : nodes) {
    v.push_back(n);
    // Width of Relu and Pool nodes follows their (possibly rewired) inputs.
    if (n.kind == LayerKind::Relu || n.kind == LayerKind::Pool) v.back().out_channels = 0;
  }
  return NetworkSpec(like.depth(), like.input_shape(), like.alpha(), std::move(v), like.skips());
}

}  // namespace

std::pair<NetworkSpec, RewriteReport> shuffle(const NetworkSpec& spec) {
  if (!has_multi(spec, LayerKind::Relu)) {
    if (has_multi(spec, LayerKind::ConcatReshape))
      throw SpecError("spec is not in conventional form: skips already enter after the Relu (shuffled or pruned)");
    return {spec, make_report(spec, spec, true)};
  }

  std::map<int, LayerNode> nodes;
  for (const auto& n : spec.nodes()) nodes.emplace(n.id, n);

  // The Relu that owns producer v is the one listing v first.
  std::map<int, int> own_relu;
  for (const auto& n : spec.nodes())
    if (n.kind == LayerKind::Relu && !own_relu.count(n.inputs.front())) own_relu.emplace(n.inputs.front(), n.id);

  for (const auto& r : spec.nodes()) {
    if (r.kind != LayerKind::Relu || r.inputs.size() < 2) continue;
    std::vector<int> replacement{r.id};
    for (std::size_t k = 1; k < r.inputs.size(); ++k) {
      const int s = r.inputs[k];
      if (s == netgraph::kNetworkInput) throw SpecError(r.id, "cannot shuffle a skip carrying the network input");
      auto own = own_relu.find(s);
      if (own != own_relu.end() && own->second != r.id) {
        replacement.push_back(own->second);
        continue;
      }
      const LayerNode& p = spec.node(s);
      if (p.kind == LayerKind::Pool && p.filter == 1 && spec.consumers(s).size() == 1) {
        auto src = own_relu.find(p.inputs.front());
        if (src != own_relu.end() && src->second < s) {
          nodes.at(s).inputs = {src->second};
          replacement.push_back(s);
          continue;
        }
      }
      throw SpecError(r.id, "forwarded value " + std::to_string(s) + " has no Relu of its own to reuse");
    }
    nodes.at(r.id).inputs = {r.inputs.front()};
    const auto consumers = spec.consumers(r.id);
    if (consumers.empty()) throw SpecError(r.id, "a multi-input Relu at the output cannot be shuffled");
    for (int c : consumers) {
      LayerNode& cn = nodes.at(c);
      if (cn.kind != LayerKind::ConcatReshape && cn.kind != LayerKind::Relu)
        throw SpecError(c, "consumer of a shuffled Relu must concatenate its inputs");
      std::vector<int> in;
      for (int x : cn.inputs) {
        if (x == r.id)
          in.insert(in.end(), replacement.begin(), replacement.end());
        else
          in.push_back(x);
      }
      cn.inputs = std::move(in);
    }
  }
  NetworkSpec out = rebuild(spec, nodes);
  return {out, make_report(spec, out, true)};
}

std::pair<NetworkSpec, RewriteReport> prune(const NetworkSpec& spec) {
  const NetworkSpec shuffled = has_multi(spec, LayerKind::Relu) ? shuffle(spec).first : spec;

  std::map<int, LayerNode> nodes;
  for (const auto& n : shuffled.nodes()) nodes.emplace(n.id, n);
  std::map<int, int> redirect;
  for (const auto& n : shuffled.nodes()) {
    if (n.kind != LayerKind::Relu || n.inputs.size() != 1) continue;
    const int in = n.inputs.front();
    if (in == netgraph::kNetworkInput || shuffled.node(in).kind != LayerKind::ConcatReshape) continue;
    redirect.emplace(n.id, in);
    nodes.erase(n.id);
  }
  if (redirect.empty()) return {shuffled, make_report(spec, shuffled, true)};
  for (auto& [id, n] : nodes)
    for (int& x : n.inputs) {
      auto it = redirect.find(x);
      if (it != redirect.end()) x = it->second;
    }
  NetworkSpec out = rebuild(shuffled, nodes);
  return {out, make_report(spec, out, false)};
}

bool verify_equivalence(const NetworkSpec& a, const NetworkSpec& b, int trials, std::uint64_t seed, double tolerance) {
  if (a.input_shape() != b.input_shape()) throw ShapeError("specs take different input shapes");
  const netgraph::Weights w = netgraph::random_weights(a, seed);
  netgraph::check_weights(b, w);
  crypto::Prg prg(crypto::derive_seed(crypto::seed_block(seed), "equivalence-inputs"));
  for (int t = 0; t < trials; ++t) {
    netgraph::TensorF x(a.input_shape());
    for (float& v : x.values) v = static_cast<float>(prg.uniform_real(-1.0, 1.0));
    const netgraph::TensorF ya = netgraph::infer_plaintext(a, x, w);
    const netgraph::TensorF yb = netgraph::infer_plaintext(b, x, w);
    if (ya.shape != yb.shape) return false;
    for (std::size_t i = 0; i < ya.values.size(); ++i)
      if (!(std::fabs(static_cast<double>(ya.values[i]) - yb.values[i]) <= tolerance)) return false;
  }
  return true;
}

std::string report_csv(const RewriteReport& r, std::string_view mode) {
  std::ostringstream os;
  os << "mode,relus_before,relus_after,reduction_ratio,functionally_equivalent\n";
  os << mode << ',' << r.relus_before << ',' << r.relus_after << ',' << r.reduction_ratio << ','
     << (r.functionally_equivalent ? "true" : "false") << '\n';
  return os.str();
}

void write_report_csv(const RewriteReport& r, std::string_view mode, const std::filesystem::path& path) {
  netgraph::write_text_file(path, report_csv(r, mode));
}

}  // namespace ciphernet::rewrites
