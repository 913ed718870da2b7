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

#include "policy_tree/io.h"

#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "gtest/gtest.h"

namespace policy_tree {
namespace {

namespace fs = std::filesystem;

class IoTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("ptree_io_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path file(const std::string& name, const std::string& content) {
    fs::path p = dir_ / name;
    std::ofstream(p, std::ios::binary) << content;
    return p;
  }

  std::string error_of(const fs::path& x, const fs::path& r) {
    try {
      load_csv(x, r);
    } catch (const DataError& e) {
      return e.what();
    }
    return "";
  }

  fs::path dir_;
};

TEST_F(IoTest, LoadsSmallDataset) {
  Dataset ds = load_csv(file("x.csv", "x1\n0.5\n1e3\n"), file("r.csv", "a1,a2\n1,2\n-3,4.25\n"));
  EXPECT_EQ(ds.num_units(), 2u);
  EXPECT_EQ(ds.num_covariates(), 1u);
  EXPECT_EQ(ds.num_actions(), 2u);
  EXPECT_EQ(ds.covariate(1, 0), 1000.0);
  EXPECT_EQ(ds.reward(1, 1), 4.25);
}

TEST_F(IoTest, AcceptsCrlfAndTrailingBlankLine) {
  Dataset ds = load_csv(file("x.csv", "x1,x2\r\n1,2\r\n3,4\r\n\r\n"), file("r.csv", "a1,a2\n0,1\n1,0"));
  EXPECT_EQ(ds.num_units(), 2u);
  EXPECT_EQ(ds.covariate(1, 1), 4.0);
}

TEST_F(IoTest, RowCountMismatch) {
  std::string msg = error_of(file("x.csv", "x1\n1\n2\n"), file("r.csv", "a1,a2\n1,2\n3,4\n5,6\n"));
  EXPECT_NE(msg.find("row count mismatch"), std::string::npos) << msg;
}

TEST_F(IoTest, HeaderMismatch) {
  std::string msg = error_of(file("x.csv", "x1,x3\n1,2\n"), file("r.csv", "a1\n1\n"));
  EXPECT_NE(msg.find("x.csv:1:2"), std::string::npos) << msg;
  msg = error_of(file("x2.csv", "x1\n1\n"), file("r2.csv", "b1\n1\n"));
  EXPECT_NE(msg.find("r2.csv:1:1"), std::string::npos) << msg;
}

TEST_F(IoTest, RaggedRow) {
  std::string msg = error_of(file("x.csv", "x1,x2\n1,2\n3\n"), file("r.csv", "a1\n1\n2\n"));
  EXPECT_NE(msg.find("x.csv:3:1"), std::string::npos) << msg;
}

TEST_F(IoTest, NonNumericCellReportsLocation) {
  std::string msg = error_of(file("x.csv", "x1,x2\n1,2\n3,abc\n"), file("r.csv", "a1\n1\n2\n"));
  EXPECT_NE(msg.find("x.csv:3:2"), std::string::npos) << msg;
  EXPECT_NE(msg.find("abc"), std::string::npos) << msg;
}

TEST_F(IoTest, EmptyFileAndMissingFile) {
  EXPECT_NE(error_of(file("x.csv", ""), file("r.csv", "a1\n")).find("header"), std::string::npos);
  EXPECT_NE(error_of(dir_ / "nope.csv", file("r2.csv", "a1\n")).find("cannot read"),
            std::string::npos);
}

TEST_F(IoTest, NonFiniteRewardRejected) {
  EXPECT_THROW(load_csv(file("x.csv", "x1\n1\n"), file("r.csv", "a1\ninf\n")), DataError);
}

TEST_F(IoTest, MatrixCsvRoundTripsExactly) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> g;
  std::vector<double> cells(60);
  for (double& v : cells) v = g(rng) * 1e-3;
  cells[5] = 1e300;
  cells[6] = -0.0;
  fs::path p = file("m.csv", matrix_to_csv("a", cells, 3));
  NumericTable t = read_numeric_csv(p, "a");
  EXPECT_EQ(t.rows, 20u);
  EXPECT_EQ(t.cells, cells);
}

TEST(FormatDoubleTest, Shortest) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(1000.0), "1000");
  EXPECT_EQ(format_double(-2.5), "-2.5");
}

TEST(TreeJsonTest, LeafExample) {
  EXPECT_EQ(tree_to_json(PolicyTree::leaf(0)), R"({"leaf":{"action":0}})");
}

TEST(TreeJsonTest, GoldenSplit) {
  const std::string golden =
      R"({"split":{"covariate":1,"value":0.5,"left":{"leaf":{"action":0}},)"
      R"("right":{"split":{"covariate":0,"value":-3.0,"left":{"leaf":{"action":2}},)"
      R"("right":{"leaf":{"action":1}}}}}})";
  PolicyTree t = tree_from_json(golden);
  EXPECT_EQ(t, PolicyTree::split(1, 0.5, PolicyTree::leaf(0),
                                 PolicyTree::split(0, -3.0, PolicyTree::leaf(2),
                                                   PolicyTree::leaf(1))));
  EXPECT_EQ(tree_to_json(t), golden);
}

PolicyTree random_tree(std::mt19937_64& rng, int depth) {
  if (depth == 0 || rng() % 4 == 0) return PolicyTree::leaf(rng() % 5);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  double v = rng() % 3 == 0 ? static_cast<double>(static_cast<int>(rng() % 100) - 50) : u(rng);
  auto left = random_tree(rng, depth - 1);
  auto right = random_tree(rng, depth - 1);
  return PolicyTree::split(rng() % 40, v, left, right);
}

TEST(TreeJsonTest, RandomTreesRoundTripByteIdentically) {
  std::mt19937_64 rng(9);
  for (int k = 0; k < 100; ++k) {
    PolicyTree t = random_tree(rng, 4);
    std::string text = tree_to_json(t);
    PolicyTree back = tree_from_json(text);
    EXPECT_EQ(back, t);
    EXPECT_EQ(tree_to_json(back), text);
  }
}

std::string parse_error(const std::string& text) {
  try {
    tree_from_json(text);
  } catch (const DataError& e) {
    return e.what();
  }
  return "";
}

TEST(TreeJsonTest, SchemaErrorsNameThePath) {
  std::string msg = parse_error(
      R"({"split":{"covariate":0,"value":1,"left":{"leaf":{}},"right":{"leaf":{"action":1}}}})");
  EXPECT_NE(msg.find("$.split.left.leaf"), std::string::npos) << msg;
  EXPECT_NE(msg.find("action"), std::string::npos) << msg;

  msg = parse_error(R"({"split":{"covariate":-1,"value":1,"left":{"leaf":{"action":0}},)"
                    R"("right":{"leaf":{"action":1}}}})");
  EXPECT_NE(msg.find("$.split.covariate"), std::string::npos) << msg;

  msg = parse_error(R"({"split":{"covariate":0,"value":"x","left":{"leaf":{"action":0}},)"
                    R"("right":{"leaf":{"action":1}}}})");
  EXPECT_NE(msg.find("$.split.value"), std::string::npos) << msg;

  EXPECT_NE(parse_error(R"({"leaf":{"action":0},"extra":1})").find("$"), std::string::npos);
  EXPECT_NE(parse_error(R"({"leaf":{"action":0,"x":1}})").find("unexpected key"), std::string::npos);
  EXPECT_NE(parse_error("{").find("invalid tree JSON"), std::string::npos);
}

TEST(StatsJsonTest, Fields) {
  SearchStats s;
  s.cache_hits = 3;
  s.elapsed_seconds = 1.23456;
  auto j = stats_to_json(s);
  EXPECT_EQ(j["cache_hits"], 3);
  EXPECT_EQ(j["elapsed_seconds"].get<double>(), 1.235);
  EXPECT_EQ(j.begin().key(), "subproblems");
}

TEST_F(IoTest, AtomicWriteLeavesNothingOnFailure) {
  fs::path good = dir_ / "a.txt";
  fs::path bad = dir_ / "missing_dir" / "b.txt";
  EXPECT_THROW(write_files_atomically({{good, "x"}, {bad, "y"}}), DataError);
  EXPECT_FALSE(fs::exists(good));
  EXPECT_TRUE(fs::is_empty(dir_));
  write_files_atomically({{good, "hello"}});
  EXPECT_EQ(read_text_file(good), "hello");
}

}  // namespace
}  // namespace policy_tree
