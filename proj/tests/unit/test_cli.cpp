// Copyright 2026 The kacs Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "kacs/cli.hpp"
#include "kacs/state_io.hpp"

using namespace kacs;

namespace {

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() /
           ("kacs_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    std::filesystem::create_directories(dir_);
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }

  int run(std::vector<std::string> args) {
    args.insert(args.begin(), "kacs");
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    return cli::main(int(argv.size()), argv.data());
  }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  static std::string slurp(const std::string& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
  }

  std::filesystem::path dir_;
};

}  // namespace

TEST_F(CliTest, ContractionCsvHasOneRowPerStep) {
  const std::string out = path("contract.csv");
  EXPECT_EQ(run({"couple-contract", "--W", "64", "--l-max", "20", "--trials", "10000", "--seed", "7", "--out", out}),
            cli::kExitOk);
  std::istringstream lines(slurp(out));
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, "name,estimate,stderr,trials,bound,verdict");
  int rows = 0;
  while (std::getline(lines, line)) {
    ++rows;
    EXPECT_TRUE(line.ends_with(",within")) << line;
  }
  EXPECT_EQ(rows, 21);
}

TEST_F(CliTest, EncryptionDemoJsonAndStateFile) {
  const std::string out = path("enc.json");
  const std::string state = path("cipher.bin");
  EXPECT_EQ(run({"enc-demo", "--n", "4", "--T", "50", "--seed", "1", "--format", "json", "--out", out,
                 "--state-out", state}),
            cli::kExitOk);
  const auto j = nlohmann::json::parse(slurp(out));
  EXPECT_EQ(j[0]["name"], "roundtrip_max_error");
  EXPECT_LT(j[0]["estimate"].get<double>(), 1e-9);
  EXPECT_EQ(load_state(state).state.dim(), 16u);
}

TEST_F(CliTest, SameSeedGivesIdenticalFiles) {
  const std::string a = path("a.csv"), b = path("b.csv"), c = path("c.csv");
  const std::vector<std::string> base = {"walk-mix", "--W", "16", "--trials", "300", "--seed",
                                         "0123456789abcdef0123456789abcdef0123456789abcdef0123456789abcdef"};
  auto args = base;
  args.insert(args.end(), {"--out", a});
  EXPECT_EQ(run(args), cli::kExitOk);
  args = base;
  args.insert(args.end(), {"--out", b});
  EXPECT_EQ(run(args), cli::kExitOk);
  EXPECT_EQ(slurp(a), slurp(b));
  args = {"walk-mix", "--W", "16", "--trials", "300", "--seed", "99", "--out", c};
  EXPECT_EQ(run(args), cli::kExitOk);
  EXPECT_NE(slurp(a), slurp(c));
}

TEST_F(CliTest, ConfigFileWithCommandLineOverride) {
  const std::string cfg = path("run.toml");
  std::ofstream(cfg) << "seed = \"5\"\nW = 16\ntrials = 200\nfield = \"complex\"\n";
  const std::string a = path("a.csv"), b = path("b.csv");
  EXPECT_EQ(run({"walk-mix", "--config", cfg, "--out", a}), cli::kExitOk);
  EXPECT_EQ(run({"walk-mix", "--seed", "5", "--W", "16", "--trials", "200", "--field", "complex", "--out", b}),
            cli::kExitOk);
  EXPECT_EQ(slurp(a), slurp(b));
  EXPECT_EQ(run({"walk-mix", "--config", cfg, "--trials", "100", "--out", b}), cli::kExitOk);
  EXPECT_NE(slurp(a), slurp(b));
}

TEST_F(CliTest, ExitCodes) {
  EXPECT_EQ(run({"no-such-experiment", "--seed", "1"}), cli::kExitUsage);
  EXPECT_EQ(run({"steer"}), cli::kExitUsage);  // seed is mandatory
  EXPECT_EQ(run({"steer", "--seed", "abc"}), cli::kExitUsage);
  EXPECT_EQ(run({"walk-mix", "--seed", "1", "--W", "7"}), cli::kExitUsage);
  // 16^4 copies exceed the dense average-state limit.
  EXPECT_EQ(run({"scramble", "--seed", "1", "--n", "4", "--l", "4", "--trials", "10", "--out", path("x.csv")}),
            cli::kExitUsage);
  // Far too few coupling steps: coalescence falls short of 0.9.
  EXPECT_EQ(run({"couple-coalesce", "--seed", "1", "--T0", "0", "--T1", "2", "--trials", "100", "--out",
                 path("c.csv")}),
            cli::kExitViolated);
}

TEST_F(CliTest, EveryExperimentRuns) {
  const std::vector<std::vector<std::string>> runs = {
      {"walk-mix", "--W", "8", "--trials", "100"},
      {"couple-contract", "--W", "8", "--l-max", "3", "--trials", "100"},
      {"couple-coalesce", "--trials", "20"},
      {"scramble", "--n", "3", "--trials", "100", "--source", "keyed"},
      {"steer", "--trials", "5"},
      {"stats", "--trials", "2000"},
      {"enc-demo", "--mode", "direct"},
      {"connectivity", "--trials", "100"},
      {"gate-error", "--trials", "10", "--field", "complex"},
  };
  ASSERT_EQ(runs.size(), cli::experiment_names().size());
  for (auto args : runs) {
    args.insert(args.end(), {"--seed", "3", "--out", path("r.csv")});
    const int code = run(args);
    EXPECT_TRUE(code == cli::kExitOk || code == cli::kExitViolated) << args[0];
    EXPECT_FALSE(slurp(path("r.csv")).empty()) << args[0];
  }
}
