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

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "ciphernet/cli/config.hpp"
#include "ciphernet/cli/dispatch.hpp"
#include "ciphernet/error.hpp"
#include "ciphernet/netgraph/counting.hpp"
#include "ciphernet/netgraph/infer.hpp"
#include "ciphernet/netgraph/spec_io.hpp"
#include "ciphernet/netgraph/weights.hpp"
#include "json.hpp"

using namespace ciphernet;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct CliRun {
  int code = 0;
  std::string out, err;
};

CliRun run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  CliRun r;
  r.code = cli::dispatch(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("ciphernet_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    std::ofstream(path("cfg.json")) << R"({"modulus": 2305843009213693951, "frac_bits": 12, "max_scale_exponent": 56})";
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  // Small planned network with weights, input and one dealing.
  void prepare(const std::string& mode = "prune") {
    auto r = run_cli({"plan", "--depths", "3", "--budget", "384", "--res", "8", "--in-channels", "2", "--classes", "3",
                  "--mode", mode, "--out", path("spec.json"), "--plan-out", path("plan.json")});
    ASSERT_EQ(r.code, 0) << r.err;
    r = run_cli({"--config", path("cfg.json"), "init", "--spec", path("spec.json"), "--weights-out", path("w.bin"),
             "--input-out", path("x.json")});
    ASSERT_EQ(r.code, 0) << r.err;
    r = run_cli({"--config", path("cfg.json"), "dealer", "--spec", path("spec.json"), "--weights", path("w.bin"), "--out",
             path("deal")});
    ASSERT_EQ(r.code, 0) << r.err;
  }

  // Runs server and client over TCP; returns (server, client).
  std::pair<CliRun, CliRun> online(const std::string& client_offline) {
    const std::string port_file = path("port");
    fs::remove(port_file);
    CliRun server;
    std::thread t([&] {
      server = run_cli({"--config", path("cfg.json"), "run-pi", "--role", "server", "--spec", path("spec.json"),
                    "--weights", path("w.bin"), "--offline", path("deal"), "--listen", "127.0.0.1:0", "--port-file",
                    port_file, "--transcript", path("server.csv")});
    });
    std::string port;
    for (int i = 0; i < 500 && port.empty(); ++i) {
      std::this_thread::sleep_for(std::chrono::milliseconds(10));
      std::ifstream in(port_file);
      std::getline(in, port);
    }
    CliRun client = run_cli({"--config", path("cfg.json"), "run-pi", "--role", "client", "--spec", path("spec.json"),
                      "--offline", client_offline, "--connect", "127.0.0.1:" + port, "--input", path("x.json"),
                      "--transcript", path("client.csv"), "--timeout-ms", "5000"});
    t.join();
    return {server, client};
  }

  fs::path dir_;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_F(CliTest, CountPrintsTotals) {
  const auto spec = netgraph::parse_spec(R"({"depth": 1, "input": [8, 8, 8], "alpha": 2, "layers": [
      {"id": 1, "kind": "relu", "inputs": [-1]}]})");
  netgraph::write_text_file(path("s.json"), netgraph::to_json(spec));
  const auto r = run_cli({"count", "--spec", path("s.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out);
  EXPECT_EQ(j.at("relus").get<int>(), 512);
  EXPECT_EQ(j.at("macs").get<int>(), 0);
  EXPECT_EQ(j.at("params").get<int>(), 0);
}

TEST_F(CliTest, BadArgumentsExitOneWithUsage) {
  auto r = run_cli({"count", "--bogus"});
  EXPECT_EQ(r.code, cli::kExitUser);
  EXPECT_EQ(json::parse(r.err).at("error").get<std::string>(), "usage");
  EXPECT_TRUE(json::parse(r.err).contains("usage"));
  r = run_cli({"frobnicate"});
  EXPECT_EQ(r.code, cli::kExitUser);
  r = run_cli({"count", "--spec", path("missing.json")});
  EXPECT_EQ(r.code, cli::kExitUser);
  EXPECT_FALSE(json::parse(r.err).at("message").get<std::string>().empty());
}

TEST_F(CliTest, PlanDealerRunPipeline) {
  prepare();
  const auto [server, client] = online(path("deal"));
  ASSERT_EQ(server.code, 0) << server.err;
  ASSERT_EQ(client.code, 0) << client.err;
  EXPECT_TRUE(fs::exists(path("server.csv")));
  EXPECT_TRUE(fs::exists(path("client.csv")));

  // The client's output equals the fixed-point forward pass.
  const auto spec = netgraph::load_spec(path("spec.json"));
  const auto w = netgraph::load_weights(path("w.bin"), spec);
  const auto cfg = cli::load_config(path("cfg.json")).fxp();
  const auto xj = json::parse(slurp(path("x.json")));
  const auto shape = xj.at("shape").get<std::vector<int>>();
  const netgraph::TensorF x({shape[0], shape[2]}, xj.at("values").get<std::vector<float>>());
  const auto want = netgraph::decode_tensor(netgraph::infer_fixed(spec, netgraph::encode_tensor(x, cfg), w, cfg));
  const auto got = json::parse(client.out).at("values").get<std::vector<float>>();
  ASSERT_EQ(got.size(), want.values.size());
  for (std::size_t i = 0; i < got.size(); ++i) EXPECT_FLOAT_EQ(got[i], want.values[i]);
}

TEST_F(CliTest, ShuffledPlanRunsEndToEnd) {
  prepare("shuffle");
  const auto [server, client] = online(path("deal"));
  EXPECT_EQ(server.code, 0) << server.err;
  EXPECT_EQ(client.code, 0) << client.err;
}

TEST_F(CliTest, MismatchedDealingExitsTwo) {
  prepare();
  const auto r = run_cli({"--config", path("cfg.json"), "--seed", "2", "dealer", "--spec", path("spec.json"), "--weights",
                      path("w.bin"), "--out", path("deal2")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto [server, client] = online(path("deal2"));
  EXPECT_EQ(client.code, cli::kExitProtocol) << client.err;
  EXPECT_EQ(server.code, cli::kExitProtocol) << server.err;
}

TEST_F(CliTest, DealerIsDeterministic) {
  prepare();
  const auto r = run_cli({"--config", path("cfg.json"), "dealer", "--spec", path("spec.json"), "--weights", path("w.bin"),
                      "--out", path("deal_again")});
  ASSERT_EQ(r.code, 0) << r.err;
  for (const auto& e : fs::recursive_directory_iterator(path("deal"))) {
    if (!e.is_regular_file()) continue;
    const auto rel = fs::relative(e.path(), path("deal"));
    EXPECT_EQ(slurp(e.path()), slurp(fs::path(path("deal_again")) / rel)) << rel;
  }
}

TEST_F(CliTest, RewriteAndBalanceCommands) {
  auto r = run_cli({"plan", "--depths", "6", "--budget", "86016", "--mode", "conventional", "--out", path("conv.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  r = run_cli({"rewrite", "--mode", "shuffle", "--in", path("conv.json"), "--out", path("shuf.json"), "--report",
           path("rep.csv"), "--verify", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_LT(netgraph::relu_count(netgraph::load_spec(path("shuf.json"))),
            netgraph::relu_count(netgraph::load_spec(path("conv.json"))));
  r = run_cli({"balance", "--rule", "relu", "--depth", "6", "--res", "32", "--budget", "86016", "--csv", path("b.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out);
  EXPECT_EQ(j.at("layers").at(5).at("channels").get<int>(), 224);
  EXPECT_TRUE(fs::exists(path("b.csv")));
}

TEST_F(CliTest, ConfigFromEnvironment) {
  ::setenv("CIPHERNET_CONFIG", path("cfg.json").c_str(), 1);
  const auto c = cli::resolve_config(std::nullopt);
  ::unsetenv("CIPHERNET_CONFIG");
  EXPECT_EQ(c.frac_bits, 12);
  EXPECT_EQ(c.modulus, (1ull << 61) - 1);
  EXPECT_EQ(cli::resolve_config(std::nullopt).frac_bits, 8);
  EXPECT_THROW(cli::parse_config(R"({"fracbits": 3})"), SpecError);
  EXPECT_THROW(cli::parse_config(R"({"modulus": 1000})"), SpecError);
  EXPECT_NE(cli::role_seed(1, "dealer"), cli::role_seed(1, "weights"));
}
