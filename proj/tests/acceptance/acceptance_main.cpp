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

// Acceptance checks 1-9. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "ciphernet/balance/allocation.hpp"
#include "ciphernet/balance/capacity_oracle.hpp"
#include "ciphernet/costmodel/microbench.hpp"
#include "ciphernet/crypto/prg.hpp"
#include "ciphernet/error.hpp"
#include "ciphernet/garble/garbler.hpp"
#include "ciphernet/garble/relu_circuit.hpp"
#include "ciphernet/mpcore/field.hpp"
#include "ciphernet/netgraph/counting.hpp"
#include "ciphernet/netgraph/infer.hpp"
#include "ciphernet/netgraph/spec_io.hpp"
#include "ciphernet/planner/planner.hpp"
#include "ciphernet/protocol/bundle_io.hpp"
#include "ciphernet/protocol/offline.hpp"
#include "ciphernet/protocol/session.hpp"
#include "ciphernet/rewrites/rewrites.hpp"
#include "random_nets.hpp"

using namespace ciphernet;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Collects failures without stopping at the first one.
class Check {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok && failures_++ < 5) notes_ << (notes_.tellp() > 0 ? "; " : "") << what;
  }
  Outcome done(const std::string& summary) const {
    if (failures_ == 0) return {true, summary};
    return {false, std::to_string(failures_) + " failure(s): " + notes_.str()};
  }

 private:
  int failures_ = 0;
  std::ostringstream notes_;
};

mpcore::FxpConfig acceptance_fxp() {
  mpcore::FxpConfig c;
  c.modulus = (1ull << 61) - 1;
  c.frac_bits = 12;
  c.max_scale_exponent = 56;
  return c;
}

int count_kind(const netgraph::NetworkSpec& s, netgraph::LayerKind k) {
  int n = 0;
  for (const auto& node : s.nodes()) n += node.kind == k;
  return n;
}

int count_linear(const netgraph::NetworkSpec& s) {
  int n = 0;
  for (const auto& node : s.nodes()) n += node.has_weights();
  return n;
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string slurp_tree(const fs::path& dir) {
  std::vector<fs::path> files;
  for (const auto& e : fs::recursive_directory_iterator(dir))
    if (e.is_regular_file()) files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::string all;
  for (const auto& f : files) {
    std::ifstream in(f, std::ios::binary);
    all += fs::relative(f, dir).string();
    all.append(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  }
  return all;
}

// 1. Protocol output equals the fixed-point oracle exactly and the float
//    forward pass within 2^(-f+2).
Outcome protocol_oracle_equality() {
  const auto cfg = acceptance_fxp();
  const double tol = std::ldexp(1.0, -cfg.frac_bits + 2);
  Check c;
  int with_skips = 0;
  double worst = 0.0;
  const int nets = 60;
  for (int i = 0; i < nets; ++i) {
    testkit::RandomNetOptions o;
    o.max_depth = 4;
    o.max_channels = 8;
    o.max_height = 8;
    o.allow_skips = i % 2 == 0;
    o.force_skips = i % 2 == 0;
    std::string label;
    const auto seed = static_cast<std::uint64_t>(1000 + i);
    const auto spec = testkit::random_net(seed, o, &label);
    with_skips += !spec.skips().empty() && std::any_of(spec.skips().begin(), spec.skips().end(),
                                                      [](const auto& s) { return !s.empty(); });
    const auto w = netgraph::random_weights(spec, seed, netgraph::WeightInit::ContractiveDyadic, cfg.frac_bits);
    const auto xf = testkit::random_input(spec.input_shape(), seed);
    const auto xq = netgraph::encode_tensor(xf, cfg);
    try {
      const auto run = protocol::run_local(spec, w, cfg, xq, seed);
      const auto fixed = netgraph::infer_fixed(spec, xq, w, cfg);
      c.expect(run.output.values == fixed.values && run.output.scale_exp == fixed.scale_exp,
               "net " + std::to_string(i) + " (" + label + ") differs from infer_fixed");
      const auto got = netgraph::decode_tensor(run.output);
      const auto want = netgraph::infer_plaintext(spec, xf, w);
      for (std::size_t k = 0; k < got.values.size(); ++k)
        worst = std::max(worst, std::abs(static_cast<double>(got.values[k]) - want.values[k]));
    } catch (const std::exception& e) {
      c.expect(false, "net " + std::to_string(i) + " (" + label + "): " + e.what());
    }
  }
  c.expect(worst <= tol, "max |protocol - plaintext| = " + fmt("%.3g", worst));
  c.expect(with_skips >= 10, "too few nets with skips");
  return c.done(std::to_string(nets) + " nets (" + std::to_string(with_skips) + " with skips), exact vs infer_fixed, " +
                "max plaintext error " + fmt("%.3g", worst) + " <= " + fmt("%.3g", tol));
}

// 2. ReLU gadget: exhaustive l=4, p=13 and 10^4 random garbled l=31 inputs.
Outcome relu_gadget() {
  Check c;
  const std::uint64_t small = 13;
  auto formula = [](std::uint64_t qs, std::uint64_t qc, std::uint64_t r, std::uint64_t p, int shift) {
    const std::uint64_t t = (qs + qc) % p;
    const bool negative = t > p / 2;
    const std::uint64_t z = negative ? 0 : t >> shift;
    return (z + p - r) % p;
  };
  std::uint64_t checked = 0;
  for (int shift = 0; shift <= 2; ++shift) {
    const auto circ = garble::build_relu_circuit(4, small, shift);
    crypto::Prg rng(77 + static_cast<std::uint64_t>(shift));
    garble::GarbledTables t;
    garble::GarblerKeys k;
    garble::garble_batch(circ, static_cast<std::uint32_t>(small * small * small), rng, t, k);
    std::vector<garble::Block> labels;
    std::vector<std::uint64_t> want;
    std::uint32_t copy = 0;
    for (std::uint64_t qs = 0; qs < small; ++qs)
      for (std::uint64_t qc = 0; qc < small; ++qc)
        for (std::uint64_t r = 0; r < small; ++r, ++copy) {
          const auto bits = garble::relu_input_bits(qs, qc, r, 4);
          const auto expect = formula(qs, qc, r, small, shift);
          c.expect(garble::bits_to_word(circ.evaluate(bits)) == expect, "plain circuit mismatch");
          for (std::uint32_t w = 0; w < circ.num_inputs; ++w)
            labels.push_back(garble::input_label(circ, k, copy, w, bits[w]));
          want.push_back(expect);
        }
    const auto out = garble::decode_outputs(circ, k, garble::evaluate_batch(circ, t, labels));
    for (std::size_t e = 0; e < want.size(); ++e, ++checked)
      c.expect(garble::bits_to_word(std::span(out).subspan(e * 4, 4)) == want[e], "garbled p=13 mismatch");
  }

  const std::uint64_t p = (1ull << 31) - 1;
  const auto circ = garble::build_relu_circuit(31, p, 8);
  crypto::Prg rng(2024), data(2025);
  const std::uint32_t n = 10000;
  garble::GarbledTables t;
  garble::GarblerKeys k;
  garble::garble_batch(circ, n, rng, t, k);
  std::vector<garble::Block> labels;
  std::vector<std::uint64_t> want;
  std::vector<std::vector<std::uint8_t>> inputs;
  for (std::uint32_t e = 0; e < n; ++e) {
    const std::uint64_t qs = data.uniform(p), qc = data.uniform(p), r = data.uniform(p);
    auto bits = garble::relu_input_bits(qs, qc, r, 31);
    for (std::uint32_t w = 0; w < circ.num_inputs; ++w) labels.push_back(garble::input_label(circ, k, e, w, bits[w]));
    want.push_back(garble::bits_to_word(circ.evaluate(bits)));
    c.expect(want.back() == formula(qs, qc, r, p, 8), "plain l=31 circuit differs from formula");
  }
  const auto out = garble::decode_outputs(circ, k, garble::evaluate_batch(circ, t, labels));
  for (std::uint32_t e = 0; e < n; ++e)
    c.expect(garble::bits_to_word(std::span(out).subspan(e * 31u, 31)) == want[e], "garbled l=31 mismatch");
  return c.done("l=4 p=13 exhaustive (" + std::to_string(checked) + " triples over 3 shifts), " + std::to_string(n) +
                " garbled l=31 evaluations match");
}

// 3. Per-element online ReLU cost at least 100x per-element linear cost.
Outcome cost_inversion() {
  Check c;
  costmodel::BenchOptions o;
  o.sizes = {8, 16, 32, 64};
  o.reps = 10;
  const auto calib = costmodel::microbench(o);
  std::string detail = "relu/mac per-element ratio:";
  for (const auto& s : calib.samples) {
    const double ratio = s.relu_ms_per_element() / s.mac_ms_per_element();
    const double per_output = s.relu_ms_per_element() / (s.conv_ms / static_cast<double>(s.relus));
    detail += " W=" + std::to_string(s.width) + ":" + fmt("%.0f", ratio) + "x (per output " + fmt("%.1f", per_output) + "x)";
    c.expect(ratio >= 100.0, "W=" + std::to_string(s.width) + " ratio " + fmt("%.1f", ratio));
  }
  c.expect(calib.samples.size() == 4, "missing sweep points");
  return c.done(detail);
}

// 4. Budget arithmetic for the three reference budgets.
Outcome budget_arithmetic() {
  Check c;
  const struct {
    int depth;
    std::uint64_t budget;
    int c1;
  } rows[] = {{6, 86016, 14}, {12, 344064, 28}, {24, 1376256, 56}};
  for (const auto& r : rows) {
    const auto core = planner::synthesize_core(r.depth, 32, 2, r.budget);
    const auto l = planner::layout_of(core);
    c.expect(l.channels[0] == r.c1, "D=" + std::to_string(r.depth) + " C1=" + std::to_string(l.channels[0]));
    c.expect(netgraph::relu_count(core) == r.budget,
             "D=" + std::to_string(r.depth) + " relus=" + std::to_string(netgraph::relu_count(core)));
  }
  return c.done("C1 = 14/28/56, relu_count equals 86016/344064/1376256");
}

// 5. Parameter ordering across rules and ReLU-balanced counts near the
//    published 1.4M/15M/167M.
Outcome scaling_rule_ordering() {
  Check c;
  const struct {
    int depth;
    std::uint64_t budget;
    double published;
  } rows[] = {{6, 86016, 1.4e6}, {12, 344064, 15e6}, {24, 1376256, 167e6}};
  std::string detail;
  for (const auto& r : rows) {
    // Reference filter plan: 5x5, with 3x3 on the first conv of stages 2 and 3.
    std::vector<int> filters(static_cast<std::size_t>(r.depth), 5);
    filters[static_cast<std::size_t>(r.depth / 3)] = 3;
    filters[static_cast<std::size_t>(2 * r.depth / 3)] = 3;
    std::uint64_t params[3];
    const balance::Rule rules[] = {balance::Rule::ReluBalanced, balance::Rule::FlopBalanced,
                                   balance::Rule::ChannelBalanced};
    for (int k = 0; k < 3; ++k) {
      const auto a = balance::allocate(rules[k], r.depth, 32, 2, r.budget);
      planner::CoreLayout l;
      l.depth = r.depth;
      l.input = {32, 3};
      l.filters = filters;
      for (const auto& la : a.layers) {
        l.heights.push_back(la.height);
        l.channels.push_back(la.channels);
      }
      params[k] = netgraph::param_count(planner::build_network(l, {}, planner::SkipMode::Prune));
    }
    const std::string d = "D=" + std::to_string(r.depth);
    c.expect(params[0] > params[1] && params[1] > params[2], d + " ordering violated");
    const double rel = std::abs(static_cast<double>(params[0]) - r.published) / r.published;
    c.expect(rel <= 0.15, d + " relu-balanced params " + std::to_string(params[0]) + " off by " + fmt("%.1f%%", 100 * rel));
    detail += d + ": " + fmt("%.3gM", params[0] / 1e6) + " > " + fmt("%.3gM", params[1] / 1e6) + " > " +
              fmt("%.3gM", params[2] / 1e6) + " (" + fmt("%+.1f%%", 100 * (params[0] - r.published) / r.published) +
              "); ";
  }
  return c.done(detail);
}

// 6. Rewrite guarantees.
Outcome rewrite_guarantees() {
  Check c;
  int graphs = 0, inputs = 0;
  for (std::uint64_t seed = 0; graphs < 20; ++seed) {
    testkit::RandomNetOptions o;
    o.min_depth = 2;
    o.force_skips = true;
    o.mode = planner::SkipMode::Conventional;
    std::string label;
    const auto g = testkit::random_net(5000 + seed, o, &label);
    const auto [s, rep] = rewrites::shuffle(g);
    c.expect(rep.relus_after < rep.relus_before, label + ": shuffle removed nothing");
    const auto w = netgraph::random_weights(g, seed);
    for (int t = 0; t < 100; ++t, ++inputs) {
      const auto x = testkit::random_input(g.input_shape(), seed * 1000 + static_cast<std::uint64_t>(t));
      const auto a = netgraph::infer_plaintext(g, x, w);
      const auto b = netgraph::infer_plaintext(s, x, w);
      c.expect(a.values == b.values, label + ": shuffled output differs");
    }
    ++graphs;
  }

  const auto core = planner::synthesize_core(12, 32, 2, 344064);
  const auto dense = planner::attach_skips(core, planner::SkipSearchOracle::all_skip().propose(12),
                                           planner::SkipMode::Conventional);
  const auto [shuffled, srep] = rewrites::shuffle(dense);
  const auto [pruned, prep] = rewrites::prune(dense);
  c.expect(srep.reduction_ratio >= 1.8, "dense-skip shuffle ratio " + fmt("%.2f", srep.reduction_ratio));
  c.expect(netgraph::relu_count(pruned) == netgraph::relu_count(core), "pruned relu_count differs from core");
  return c.done(std::to_string(graphs) + " graphs x 100 inputs bit-exact; D=12 dense skips: shuffle " +
                fmt("%.2fx", srep.reduction_ratio) + ", prune " + fmt("%.2fx", prep.reduction_ratio) +
                " (relus " + std::to_string(netgraph::relu_count(pruned)) + " = core)");
}

// 7. Stationarity of ReLU-balanced allocations on random instances.
Outcome stationarity() {
  Check c;
  crypto::Prg prg(7);
  for (int i = 0; i < 100; ++i) {
    const int depth = 3 * (1 + static_cast<int>(prg.uniform(8)));
    const int h0 = 8 << prg.uniform(3);
    const std::uint64_t floor_budget = static_cast<std::uint64_t>(depth) * h0 * h0;
    const std::uint64_t budget = floor_budget + prg.uniform(floor_budget * 200);
    const int filter = prg.next_bit() ? 5 : 3;
    const auto a = balance::allocate(balance::Rule::ReluBalanced, depth, h0, 2, budget, {}, filter);
    const std::string tag = "D=" + std::to_string(depth) + " H0=" + std::to_string(h0) + " R=" + std::to_string(budget);
    c.expect(balance::stationarity_check(a, filter), tag + ": not stationary");
    std::uint64_t lo = UINT64_MAX, hi = 0;
    for (const auto& l : a.layers) {
      const std::uint64_t r = static_cast<std::uint64_t>(l.height) * l.height * l.channels;
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    c.expect(hi - lo <= static_cast<std::uint64_t>(h0) * h0, tag + ": per-layer ReLUs spread " + std::to_string(hi - lo));
  }
  // Logged only: the brute-force constrained maximum on a small instance.
  const auto oracle = balance::capacity_oracle(3, 8, 2, 3, 3 * 64 * 4, 60);
  const auto a = balance::allocate(balance::Rule::ReluBalanced, 3, 8, 2, 3 * 64 * 4);
  std::string best;
  for (int v : oracle.best) best += (best.empty() ? "" : ",") + std::to_string(v);
  std::string bal;
  for (const auto& l : a.layers) bal += (bal.empty() ? "" : ",") + std::to_string(l.channels);
  return c.done("100 random instances stationary; logged D=3 H0=8 R=768: oracle max (" + best + ") vs balanced (" + bal +
                ")");
}

// 8. Transcript rounds and byte conservation.
Outcome transcript_accounting() {
  Check c;
  const auto cfg = acceptance_fxp();
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    std::string label;
    const auto spec = testkit::random_net(9000 + seed, {}, &label);
    const auto w = netgraph::random_weights(spec, seed, netgraph::WeightInit::ContractiveDyadic, cfg.frac_bits);
    const auto x = netgraph::encode_tensor(testkit::random_input(spec.input_shape(), seed), cfg);
    const auto run = protocol::run_local(spec, w, cfg, x, seed);
    const int want = count_linear(spec) + 2 * count_kind(spec, netgraph::LayerKind::Relu);
    c.expect(run.client.layer_rounds() == want && run.server.layer_rounds() == want,
             label + ": rounds " + std::to_string(run.client.layer_rounds()) + " != " + std::to_string(want));
    c.expect(run.client.total_bytes_out() == run.server.total_bytes_in(), label + ": client->server bytes differ");
    c.expect(run.server.total_bytes_out() == run.client.total_bytes_in(), label + ": server->client bytes differ");
  }
  return c.done("20 random nets: rounds = linear + 2*relu, bytes conserved both ways");
}

// 9. Determinism of specs, bundles and shares.
Outcome determinism() {
  Check c;
  planner::PlanOptions o;
  o.depths = {6, 12};
  o.budget = 344064;
  o.oracle = planner::SkipSearchOracle::random_sample(2, 31);
  c.expect(netgraph::to_json(planner::plan(o)) == netgraph::to_json(planner::plan(o)), "plan differs between runs");

  const auto cfg = acceptance_fxp();
  const auto spec = testkit::random_net(4242);
  const auto w = netgraph::random_weights(spec, 4242, netgraph::WeightInit::ContractiveDyadic, cfg.frac_bits);
  const protocol::CompiledNet server_net(spec, cfg, &w);
  const protocol::CompiledNet client_net(spec, cfg, nullptr);
  const auto base = fs::temp_directory_path() / "ciphernet_acceptance_det";
  fs::remove_all(base);
  std::string trees[2];
  for (int k = 0; k < 2; ++k) {
    const auto [cb, sb] = protocol::offline_phase(server_net, 99);
    protocol::save_bundles(base / std::to_string(k), server_net, cb, sb);
    trees[k] = slurp_tree(base / std::to_string(k));
  }
  c.expect(!trees[0].empty() && trees[0] == trees[1], "offline bundles differ");
  fs::remove_all(base);

  const auto x = netgraph::encode_tensor(testkit::random_input(spec.input_shape(), 1), cfg);
  auto share_run = [&] {
    auto [cb, sb] = protocol::offline_phase(server_net, 99);
    const auto mask = cb.input_mask;
    const auto run = protocol::run_local(server_net, client_net, std::move(cb), std::move(sb), x);
    return std::make_pair(mask, run);
  };
  const auto a = share_run();
  const auto b = share_run();
  c.expect(a.first == b.first, "input mask shares differ");
  c.expect(a.second.output.values == b.second.output.values, "outputs differ");
  c.expect(a.second.client.total_bytes_out() == b.second.client.total_bytes_out(), "message sizes differ");
  return c.done("plan JSON, bundle files and shares identical across two runs");
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"1 protocol-oracle equality", protocol_oracle_equality},
      {"2 relu gadget correctness", relu_gadget},
      {"3 cost inversion", cost_inversion},
      {"4 budget arithmetic", budget_arithmetic},
      {"5 scaling-rule ordering", scaling_rule_ordering},
      {"6 rewrite guarantees", rewrite_guarantees},
      {"7 stationarity", stationarity},
      {"8 transcript accounting", transcript_accounting},
      {"9 determinism", determinism},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome r;
    try {
      r = fn();
    } catch (const std::exception& e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s criterion %s: %s [%.1fs]\n", r.pass ? "PASS" : "FAIL", name.c_str(), r.detail.c_str(), s);
    std::fflush(stdout);
    failed += !r.pass;
  }
  return failed == 0 ? 0 : 1;
}
