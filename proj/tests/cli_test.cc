// Copyright 2026 The policy_tree Authors.
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

#include "policy_tree/cli.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "json.hpp"
#include "policy_tree/io.h"

namespace policy_tree {
namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("ptree_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  void simulate(const std::string& n = "300") {
    CliResult r = run({"simulate", "--n", n, "--p", "4", "--m", "3", "--seed", "5", "--out",
                       path("sim")});
    ASSERT_EQ(r.code, 0) << r.err;
  }

  fs::path dir_;
};

// Drops wall-clock fields so the rest can be compared byte for byte.
void strip_timing(ordered_json& j) {
  if (j.is_object()) {
    for (const char* key : {"elapsed_seconds", "time_mean", "time_sd"}) j.erase(key);
    for (auto& [k, v] : j.items()) strip_timing(v);
  } else if (j.is_array()) {
    for (auto& v : j) strip_timing(v);
  }
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(run({}).code, kExitUsage);
  EXPECT_EQ(run({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(run({"train", "--rewards", "r.csv"}).code, kExitUsage);
  EXPECT_EQ(run({"train", "--covariates", "x", "--rewards", "r", "--depth", "0"}).code, kExitUsage);
  EXPECT_EQ(run({"train", "--covariates", "x", "--rewards", "r", "--method", "m3"}).code,
            kExitUsage);
  EXPECT_EQ(run({"simulate", "--p", "2", "--out", path("s")}).code, kExitUsage);
  CliResult r = run({"bench", "--variants", "fastest"});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_EQ(std::count(r.err.begin(), r.err.end(), '\n'), 1);
}

TEST_F(CliTest, HelpSucceeds) {
  CliResult r = run({"--help"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("train"), std::string::npos);
}

TEST_F(CliTest, MissingInputIsDataError) {
  CliResult r = run({"train", "--covariates", path("none.csv"), "--rewards", path("none2.csv"), "--out",
               path("t.json")});
  EXPECT_EQ(r.code, kExitData);
  EXPECT_FALSE(fs::exists(path("t.json")));
  EXPECT_EQ(std::count(r.err.begin(), r.err.end(), '\n'), 1);
}

TEST_F(CliTest, SimulateWritesAllFiles) {
  simulate();
  for (const char* name : {"covariates.csv", "treatment.csv", "outcome.csv", "rewards.csv"}) {
    EXPECT_TRUE(fs::exists(dir_ / "sim" / name)) << name;
  }
  std::string first = read_text_file(dir_ / "sim" / "rewards.csv");
  simulate();
  EXPECT_EQ(read_text_file(dir_ / "sim" / "rewards.csv"), first);
  NumericTable w = read_numeric_csv(dir_ / "sim" / "treatment.csv", "");
  EXPECT_EQ(w.header, std::vector<std::string>{"w"});
  EXPECT_EQ(w.rows, 300u);
}

TEST_F(CliTest, TrainPredictReconcile) {
  simulate();
  const std::string x = path("sim/covariates.csv"), g = path("sim/rewards.csv");
  CliResult t = run({"train", "--covariates", x, "--rewards", g, "--depth", "2", "--out",
               path("tree.json"), "--stats", path("stats.json")});
  ASSERT_EQ(t.code, 0) << t.err;
  ordered_json stats = ordered_json::parse(read_text_file(path("stats.json")));
  EXPECT_EQ(stats["depth"], 2);
  EXPECT_TRUE(stats["stats"].contains("cache_hits"));
  EXPECT_EQ(stats["tree"].dump() + "\n", read_text_file(path("tree.json")));

  CliResult p = run({"predict", "--tree", path("tree.json"), "--covariates", x, "--rewards", g, "--out",
               path("actions.csv"), "--stats", path("pstats.json")});
  ASSERT_EQ(p.code, 0) << p.err;
  EXPECT_EQ(p.out, t.out);
  ordered_json pstats = ordered_json::parse(read_text_file(path("pstats.json")));
  EXPECT_EQ(pstats["reward"].get<double>(), stats["reward"].get<double>());
  NumericTable actions = read_numeric_csv(path("actions.csv"), "");
  EXPECT_EQ(actions.rows, 300u);

  CliResult bare = run({"predict", "--tree", path("tree.json"), "--covariates", x});
  ASSERT_EQ(bare.code, 0) << bare.err;
  EXPECT_EQ(bare.out, read_text_file(path("actions.csv")));
}

TEST_F(CliTest, StrategyTogglesGiveIdenticalTrees) {
  simulate();
  const std::string x = path("sim/covariates.csv"), g = path("sim/rewards.csv");
  ASSERT_EQ(run({"train", "--covariates", x, "--rewards", g, "--out", path("a.json"), "--stats",
                 path("a_stats.json")})
                .code,
            0);
  ASSERT_EQ(run({"train", "--covariates", x, "--rewards", g, "--no-bounds", "--no-cache", "--out",
                 path("b.json"), "--stats", path("b_stats.json")})
                .code,
            0);
  EXPECT_EQ(read_text_file(path("a.json")), read_text_file(path("b.json")));
  auto a = ordered_json::parse(read_text_file(path("a_stats.json")));
  auto b = ordered_json::parse(read_text_file(path("b_stats.json")));
  EXPECT_EQ(a["reward"], b["reward"]);
  strip_timing(a);
  strip_timing(b);
  EXPECT_NE(a["stats"], b["stats"]);
}

TEST_F(CliTest, PredictRejectsTreeOutsideData) {
  simulate();
  std::ofstream(path("bad.json")) << R"({"split":{"covariate":9,"value":0.0,)"
                                     R"("left":{"leaf":{"action":0}},"right":{"leaf":{"action":1}}}})";
  CliResult r = run({"predict", "--tree", path("bad.json"), "--covariates", path("sim/covariates.csv"),
               "--out", path("act.csv")});
  EXPECT_EQ(r.code, kExitData);
  EXPECT_FALSE(fs::exists(path("act.csv")));

  std::ofstream(path("broken.json")) << R"({"leaf":{}})";
  r = run({"predict", "--tree", path("broken.json"), "--covariates", path("sim/covariates.csv")});
  EXPECT_EQ(r.code, kExitData);
  EXPECT_NE(r.err.find("$.leaf"), std::string::npos) << r.err;
}

TEST_F(CliTest, VerifySeededInstances) {
  CliResult r = run({"verify", "--reps", "50", "--n", "20", "--p", "3", "--m", "3", "--depth", "2"});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("verified 50"), std::string::npos);
  r = run({"verify", "--reps", "20", "--n", "16", "--kind", "discrete", "--depth", "3"});
  EXPECT_EQ(r.code, kExitOk) << r.err;
}

TEST_F(CliTest, VerifyCsvInput) {
  simulate("40");
  CliResult r = run({"verify", "--covariates", path("sim/covariates.csv"), "--rewards",
               path("sim/rewards.csv"), "--depth", "2"});
  EXPECT_EQ(r.code, kExitOk) << r.err;
}

TEST_F(CliTest, BenchIsDeterministicApartFromTiming) {
  const std::vector<std::string> args{"bench", "--n", "200", "--p", "4", "--reps", "10", "--seed",
                                      "3", "--variants", "bounded,baseline,method2"};
  CliResult a = run(args), b = run(args);
  ASSERT_EQ(a.code, 0) << a.err;
  auto ja = ordered_json::parse(a.out), jb = ordered_json::parse(b.out);
  ASSERT_EQ(ja["variants"].size(), 3u);
  EXPECT_EQ(ja["variants"][0]["runs"].size(), 10u);
  EXPECT_EQ(ja["variants"][1]["value_rmse_vs_first"].get<double>(), 0.0);
  EXPECT_GE(ja["variants"][0]["time_sd"].get<double>(), 0.0);
  strip_timing(ja);
  strip_timing(jb);
  EXPECT_EQ(ja.dump(), jb.dump());
}

TEST_F(CliTest, BenchCsvToFile) {
  CliResult r = run({"bench", "--n", "100", "--p", "3", "--reps", "2", "--format", "csv", "--out",
               path("bench.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  NumericTable t;
  std::string text = read_text_file(path("bench.csv"));
  EXPECT_EQ(text.rfind("variant,rep,seed,reward", 0), 0u);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 3);
}

}  // namespace
}  // namespace policy_tree
