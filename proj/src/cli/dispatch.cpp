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

#include "ciphernet/cli/dispatch.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "ciphernet/balance/allocation.hpp"
#include "ciphernet/cli/config.hpp"
#include "ciphernet/costmodel/estimate.hpp"
#include "ciphernet/costmodel/microbench.hpp"
#include "ciphernet/costmodel/range_analysis.hpp"
#include "ciphernet/crypto/prg.hpp"
#include "ciphernet/error.hpp"
#include "ciphernet/netgraph/counting.hpp"
#include "ciphernet/netgraph/infer.hpp"
#include "ciphernet/netgraph/spec_io.hpp"
#include "ciphernet/netgraph/weights.hpp"
#include "ciphernet/planner/planner.hpp"
#include "ciphernet/protocol/bundle_io.hpp"
#include "ciphernet/protocol/offline.hpp"
#include "ciphernet/protocol/session.hpp"
#include "ciphernet/rewrites/rewrites.hpp"
#include "json.hpp"

namespace ciphernet::cli {

using nlohmann::json;
namespace fs = std::filesystem;

std::string error_json(std::string_view kind, std::string_view message, std::string_view usage) {
  json j;
  j["error"] = std::string(kind);
  j["message"] = std::string(message);
  if (!usage.empty()) j["usage"] = std::string(usage);
  return j.dump();
}

namespace {

std::vector<int> parse_int_list(const std::string& s, const char* what) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw SpecError(std::string("malformed ") + what + " list '" + s + "'");
    }
  }
  return out;
}

void emit(std::ostream& out, const std::optional<fs::path>& path, const std::string& text) {
  if (path)
    netgraph::write_text_file(*path, text);
  else
    out << text;
}

// Input tensor file: {"shape": [H, H, C], "values": [...]} in HWC order.
netgraph::TensorF load_input(const fs::path& path) {
  try {
    const json j = json::parse(netgraph::read_text_file(path));
    const auto shape = j.at("shape").get<std::vector<int>>();
    if (shape.size() != 3 || shape[0] != shape[1]) throw SpecError("input shape must be [H, H, C]");
    return netgraph::TensorF({shape[0], shape[2]}, j.at("values").get<std::vector<float>>());
  } catch (const json::exception& e) {
    throw SpecError("malformed input file " + path.string() + ": " + e.what());
  }
}

std::string tensor_json(const netgraph::TensorF& t, std::optional<int> scale_exp = std::nullopt) {
  json j;
  j["shape"] = {t.shape.height, t.shape.height, t.shape.channels};
  if (scale_exp) j["scale_exp"] = *scale_exp;
  j["values"] = t.values;
  return j.dump() + "\n";
}

struct Options {
  std::optional<fs::path> config;
  std::optional<std::uint64_t> seed, modulus;
  std::optional<int> frac_bits;

  // shared
  fs::path spec, weights, in, out_path, offline, input, calib;
  std::optional<fs::path> out, csv, report, transcript, output, port_file;

  // rewrite
  std::string mode = "shuffle";
  int verify = 0;
  // balance
  std::string rule = "relu";
  int depth = 6, res = 32, alpha = 2, filter = 3, in_channels = 3, classes = 10;
  std::uint64_t budget = 0;
  std::string stages;
  // plan
  std::string depths = "6,12,24", oracle = "allskip", plan_mode = "prune";
  std::optional<fs::path> plan_out;
  // init
  std::string init = "contractive";
  std::optional<fs::path> weights_out, input_out;
  // dealer
  double input_bound = 1.0;
  // run-pi
  std::string role, listen = "127.0.0.1:0", connect;
  int timeout_ms = 10000;
  // bench
  std::string sizes = "8,16,32,64";
  int reps = 10;
  // estimate / report
  std::string name = "net";
  fs::path acc;
  bool force = false;
};

GlobalConfig effective_config(const Options& o) {
  GlobalConfig c = resolve_config(o.config);
  if (o.seed) c.seed = *o.seed;
  if (o.modulus) c.modulus = *o.modulus;
  if (o.frac_bits) c.frac_bits = *o.frac_bits;
  c.validate();
  return c;
}

int cmd_count(const Options& o, std::ostream& out) {
  const auto spec = netgraph::load_spec(o.spec);
  json j;
  j["relus"] = netgraph::relu_count(spec);
  j["macs"] = netgraph::flop_count(spec);
  j["params"] = netgraph::param_count(spec);
  j["rounds"] = costmodel::online_rounds(spec);
  out << j.dump() << "\n";
  if (o.csv) {
    std::ostringstream os;
    os << "id,kind,height,channels,relus,macs,params\n";
    for (const auto& r : netgraph::layer_counts(spec))
      os << r.id << ',' << netgraph::to_string(r.kind) << ',' << r.out.height << ',' << r.out.channels << ','
         << r.relus << ',' << r.macs << ',' << r.params << '\n';
    netgraph::write_text_file(*o.csv, os.str());
  }
  return kExitOk;
}

int cmd_rewrite(const Options& o, std::ostream& out) {
  const auto spec = netgraph::load_spec(o.in);
  const auto mode = planner::parse_skip_mode(o.mode);
  if (mode == planner::SkipMode::Conventional) throw SpecError("rewrite mode must be shuffle or prune");
  auto [result, report] = mode == planner::SkipMode::Shuffle ? rewrites::shuffle(spec) : rewrites::prune(spec);
  if (o.verify > 0) report.functionally_equivalent = rewrites::verify_equivalence(spec, result, o.verify);
  netgraph::save_spec(result, o.out_path);
  if (o.report) rewrites::write_report_csv(report, o.mode, *o.report);
  json j;
  j["relus_before"] = report.relus_before;
  j["relus_after"] = report.relus_after;
  j["reduction_ratio"] = report.reduction_ratio;
  j["functionally_equivalent"] = report.functionally_equivalent;
  out << j.dump() << "\n";
  return kExitOk;
}

int cmd_balance(const Options& o, std::ostream& out) {
  const auto rule = balance::parse_rule(o.rule);
  const auto alloc = balance::allocate(rule, o.depth, o.res, o.alpha, o.budget, parse_int_list(o.stages, "stage"),
                                       o.filter);
  json j;
  j["rule"] = std::string(balance::to_string(rule));
  j["budget"] = o.budget;
  j["alpha"] = o.alpha;
  j["filter"] = o.filter;
  j["relus_used"] = alloc.relus_used();
  if (rule == balance::Rule::ReluBalanced) j["lagrange_lambda"] = alloc.lagrange_lambda;
  j["stationary"] = balance::stationarity_check(alloc, o.filter);
  j["layers"] = json::array();
  std::ostringstream csv;
  csv << "layer,height,channels,relus,macs,params\n";
  int cin = o.in_channels;
  for (std::size_t i = 0; i < alloc.layers.size(); ++i) {
    const auto& l = alloc.layers[i];
    const std::uint64_t h2 = static_cast<std::uint64_t>(l.height) * static_cast<std::uint64_t>(l.height);
    const std::uint64_t k = static_cast<std::uint64_t>(o.filter) * static_cast<std::uint64_t>(o.filter) *
                            static_cast<std::uint64_t>(cin) * static_cast<std::uint64_t>(l.channels);
    const std::uint64_t relus = h2 * static_cast<std::uint64_t>(l.channels);
    j["layers"].push_back({{"layer", i}, {"height", l.height}, {"channels", l.channels}, {"relus", relus},
                           {"macs", h2 * k}, {"params", k + static_cast<std::uint64_t>(l.channels)}});
    csv << i << ',' << l.height << ',' << l.channels << ',' << relus << ',' << h2 * k << ',' << k + l.channels << '\n';
    cin = l.channels;
  }
  emit(out, o.out, j.dump(2) + "\n");
  if (o.csv) netgraph::write_text_file(*o.csv, csv.str());
  return kExitOk;
}

int cmd_plan(const Options& o, std::ostream& out) {
  planner::PlanOptions p;
  p.depths = parse_int_list(o.depths, "depth");
  p.budget = o.budget;
  p.h0 = o.res;
  p.alpha = o.alpha;
  p.input_channels = o.in_channels;
  p.classes = o.classes;
  p.oracle = planner::SkipSearchOracle::parse(o.oracle);
  p.mode = planner::parse_skip_mode(o.plan_mode);
  const auto result = planner::plan_all(p);
  netgraph::save_spec(result.best().spec, o.out_path);
  if (o.plan_out) planner::save_skip_plan(p.oracle.propose(result.best().depth), *o.plan_out);
  json j;
  j["chosen_depth"] = result.best().depth;
  j["candidates"] = json::array();
  for (const auto& c : result.candidates)
    j["candidates"].push_back(
        {{"depth", c.depth}, {"c1", c.c1}, {"relus", c.relus}, {"params", c.params}, {"score", c.score}});
  out << j.dump() << "\n";
  return kExitOk;
}

int cmd_init(const Options& o, const GlobalConfig& cfg, std::ostream& out) {
  const auto spec = netgraph::load_spec(o.spec);
  if (!o.weights_out && !o.input_out) throw SpecError("init needs --weights-out and/or --input-out");
  if (o.weights_out) {
    netgraph::WeightInit init;
    if (o.init == "contractive") init = netgraph::WeightInit::ContractiveDyadic;
    else if (o.init == "scaled") init = netgraph::WeightInit::Scaled;
    else throw SpecError("unknown weight init '" + o.init + "' (contractive|scaled)");
    netgraph::save_weights(netgraph::random_weights(spec, role_seed(cfg.seed, "weights"), init, cfg.frac_bits),
                           *o.weights_out);
  }
  if (o.input_out) {
    crypto::Prg prg(role_seed(cfg.seed, "input"));
    netgraph::TensorF x(spec.input_shape());
    for (float& v : x.values) v = static_cast<float>(prg.uniform_real(-1.0, 1.0));
    netgraph::write_text_file(*o.input_out, tensor_json(x));
  }
  out << json{{"ok", true}}.dump() << "\n";
  return kExitOk;
}

int cmd_dealer(const Options& o, const GlobalConfig& cfg, std::ostream& out) {
  const auto spec = netgraph::load_spec(o.spec);
  const auto weights = netgraph::load_weights(o.weights, spec);
  const auto range = costmodel::analyze_range(spec, weights, cfg.fxp(), o.input_bound);
  const protocol::CompiledNet net(spec, cfg.fxp(), &weights);
  const auto [client, server] = protocol::offline_phase(net, role_seed(cfg.seed, "dealer"));
  protocol::save_bundles(o.out_path, net, client, server);
  json j;
  j["dir"] = o.out_path.string();
  j["max_scale_exp"] = range.max_scale_exp;
  j["relu_layers"] = client.relus.size();
  j["linear_layers"] = client.triples.size();
  out << j.dump() << "\n";
  return kExitOk;
}

mpcore::FxpConfig bundle_fxp(const protocol::BundleHeader& h, const GlobalConfig& cfg) {
  mpcore::FxpConfig f = cfg.fxp();
  f.modulus = h.modulus;
  f.frac_bits = h.frac_bits;
  return f;
}

int cmd_run_pi(const Options& o, const GlobalConfig& cfg, std::ostream& out) {
  const auto spec = netgraph::load_spec(o.spec);
  if (o.role == "server") {
    if (o.weights.empty()) throw SpecError("server needs --weights");
    const auto weights = netgraph::load_weights(o.weights, spec);
    auto bundle = protocol::load_server_bundle(o.offline);
    const protocol::CompiledNet net(spec, bundle_fxp(bundle.header, cfg), &weights);
    protocol::Listener listener(o.listen);
    if (o.port_file) netgraph::write_text_file(*o.port_file, std::to_string(listener.port()) + "\n");
    out << json{{"listening", listener.port()}}.dump() << std::endl;
    protocol::Channel ch = listener.accept();
    protocol::ServerSession session(net, std::move(bundle), ch);
    const auto t = session.run();
    if (o.transcript) t.write_csv(*o.transcript);
    out << json{{"ok", true}, {"ms", t.total_ms()}, {"bytes_out", t.total_bytes_out()}, {"bytes_in", t.total_bytes_in()}}
               .dump()
        << "\n";
    return kExitOk;
  }
  if (o.role == "client") {
    if (o.connect.empty() || o.input.empty()) throw SpecError("client needs --connect and --input");
    auto bundle = protocol::load_client_bundle(o.offline);
    const auto fxp = bundle_fxp(bundle.header, cfg);
    const protocol::CompiledNet net(spec, fxp, nullptr);
    const auto x = load_input(o.input);
    if (x.shape != spec.input_shape()) throw ShapeError("input shape does not match the network spec");
    protocol::Channel ch = protocol::Channel::connect(o.connect, o.timeout_ms);
    protocol::ClientSession session(net, std::move(bundle), ch);
    const auto result = session.run(netgraph::encode_tensor(x, fxp));
    if (o.transcript) result.transcript.write_csv(*o.transcript);
    emit(out, o.output, tensor_json(netgraph::decode_tensor(result.output), result.output.scale_exp));
    return kExitOk;
  }
  throw SpecError("--role must be server or client");
}

int cmd_bench(const Options& o, const GlobalConfig& cfg, std::ostream& out) {
  costmodel::BenchOptions b;
  b.sizes = parse_int_list(o.sizes, "size");
  b.reps = o.reps;
  b.seed = role_seed(cfg.seed, "bench");
  b.fxp = cfg.fxp();
  const auto calib = costmodel::microbench(b);
  emit(out, o.out, costmodel::to_json(calib));
  return kExitOk;
}

int cmd_estimate(const Options& o, std::ostream& out) {
  const auto spec = netgraph::load_spec(o.spec);
  const auto calib = costmodel::load_calibration(o.calib);
  emit(out, o.out, costmodel::to_json(costmodel::estimate(spec, calib, o.name)));
  return kExitOk;
}

int cmd_pareto(const Options& o, std::ostream& out) {
  const auto reports = costmodel::load_reports(o.in);
  costmodel::check_fingerprints(reports, o.force);
  const auto acc = costmodel::parse_accuracy_csv(netgraph::read_text_file(o.acc));
  const auto front = costmodel::pareto_front(reports, acc);
  emit(out, o.out, costmodel::pareto_csv(front, acc));
  return kExitOk;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"ciphernet: ReLU-budget network planning and two-party private inference", "ciphernet"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--config", o.config, "JSON config (default: $CIPHERNET_CONFIG)");
  app.add_option("--seed", o.seed, "Master seed");
  app.add_option("--modulus", o.modulus, "Field prime p");
  app.add_option("--frac-bits", o.frac_bits, "Fixed-point fraction bits f");

  auto* count = app.add_subcommand("count", "ReLU, MAC and parameter counts of a spec");
  count->add_option("--spec", o.spec)->required();
  count->add_option("--csv", o.csv, "Per-node CSV");

  auto* rewrite = app.add_subcommand("rewrite", "ReLU shuffling or pruning");
  rewrite->add_option("--mode", o.mode)->required()->check(CLI::IsMember({"shuffle", "prune"}));
  rewrite->add_option("--in", o.in)->required();
  rewrite->add_option("--out", o.out_path)->required();
  rewrite->add_option("--report", o.report, "Report CSV");
  rewrite->add_option("--verify", o.verify, "Random trials for an equivalence check");

  auto* bal = app.add_subcommand("balance", "Channel allocation under a ReLU budget");
  bal->add_option("--rule", o.rule)->check(CLI::IsMember({"relu", "flop", "channel"}));
  bal->add_option("--depth", o.depth)->required();
  bal->add_option("--res", o.res)->required();
  bal->add_option("--budget", o.budget)->required();
  bal->add_option("--alpha", o.alpha);
  bal->add_option("--stages", o.stages, "First layer of each later stage, e.g. 2,4");
  bal->add_option("--filter", o.filter);
  bal->add_option("--in-channels", o.in_channels);
  bal->add_option("--out", o.out, "Allocation JSON (default stdout)");
  bal->add_option("--csv", o.csv, "Per-layer summary CSV");

  auto* pl = app.add_subcommand("plan", "Core synthesis, skip search and model selection");
  pl->add_option("--depths", o.depths);
  pl->add_option("--budget", o.budget)->required();
  pl->add_option("--oracle", o.oracle, "allskip | random:K:SEED | file:PATH");
  pl->add_option("--mode", o.plan_mode)->check(CLI::IsMember({"conventional", "shuffle", "prune"}));
  pl->add_option("--out", o.out_path)->required();
  pl->add_option("--plan-out", o.plan_out, "Skip plan of the chosen depth");
  pl->add_option("--res", o.res);
  pl->add_option("--alpha", o.alpha);
  pl->add_option("--in-channels", o.in_channels);
  pl->add_option("--classes", o.classes);

  auto* init = app.add_subcommand("init", "Random weights and a random input for a spec");
  init->add_option("--spec", o.spec)->required();
  init->add_option("--weights-out", o.weights_out);
  init->add_option("--input-out", o.input_out);
  init->add_option("--init", o.init)->check(CLI::IsMember({"contractive", "scaled"}));

  auto* dealer = app.add_subcommand("dealer", "Offline phase: triples, garbled gadgets, OT correlations");
  dealer->add_option("--spec", o.spec)->required();
  dealer->add_option("--weights", o.weights)->required();
  dealer->add_option("--out", o.out_path)->required();
  dealer->add_option("--input-bound", o.input_bound, "Bound on |input| for the range check");

  auto* run = app.add_subcommand("run-pi", "Online protocol as server or client");
  run->add_option("--role", o.role)->required()->check(CLI::IsMember({"server", "client"}));
  run->add_option("--spec", o.spec)->required();
  run->add_option("--weights", o.weights);
  run->add_option("--offline", o.offline)->required();
  run->add_option("--listen", o.listen);
  run->add_option("--connect", o.connect);
  run->add_option("--input", o.input);
  run->add_option("--transcript", o.transcript);
  run->add_option("--output", o.output, "Client output JSON (default stdout)");
  run->add_option("--port-file", o.port_file, "Server writes its bound port here");
  run->add_option("--timeout-ms", o.timeout_ms);

  auto* bench = app.add_subcommand("bench", "ReLU vs linear cost sweep and calibration");
  bench->add_option("--sizes", o.sizes);
  bench->add_option("--reps", o.reps);
  bench->add_option("--out", o.out);

  auto* est = app.add_subcommand("estimate", "Linear online-cost estimate");
  est->add_option("--spec", o.spec)->required();
  est->add_option("--calib", o.calib)->required();
  est->add_option("--name", o.name);
  est->add_option("--out", o.out);

  auto* report = app.add_subcommand("report", "Reports over saved estimates");
  report->require_subcommand(1);
  auto* pareto = report->add_subcommand("pareto", "Latency/accuracy frontier");
  pareto->add_option("--in", o.in)->required();
  pareto->add_option("--acc", o.acc)->required();
  pareto->add_option("--out", o.out);
  pareto->add_flag("--force", o.force, "Mix calibrations from different environments");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << error_json("usage", e.what(), app.help()) << std::endl;
    return kExitUser;
  }

  try {
    const GlobalConfig cfg = effective_config(o);
    if (count->parsed()) return cmd_count(o, out);
    if (rewrite->parsed()) return cmd_rewrite(o, out);
    if (bal->parsed()) return cmd_balance(o, out);
    if (pl->parsed()) return cmd_plan(o, out);
    if (init->parsed()) return cmd_init(o, cfg, out);
    if (dealer->parsed()) return cmd_dealer(o, cfg, out);
    if (run->parsed()) return cmd_run_pi(o, cfg, out);
    if (bench->parsed()) return cmd_bench(o, cfg, out);
    if (est->parsed()) return cmd_estimate(o, out);
    if (pareto->parsed()) return cmd_pareto(o, out);
    err << error_json("usage", "no subcommand") << std::endl;
    return kExitUser;
  } catch (const ProtocolError& e) {
    err << error_json(e.kind(), e.what()) << std::endl;
    return kExitProtocol;
  } catch (const Error& e) {
    err << error_json(e.kind(), e.what()) << std::endl;
    return kExitUser;
  } catch (const fs::filesystem_error& e) {
    err << error_json("io", e.what()) << std::endl;
    return kExitUser;
  } catch (const std::exception& e) {
    err << error_json("internal", e.what()) << std::endl;
    return kExitUser;
  }
}

int dispatch(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return dispatch(args, std::cout, std::cerr);
}

}  // namespace ciphernet::cli
