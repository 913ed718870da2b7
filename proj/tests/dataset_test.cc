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

#include "policy_tree/dataset.h"

#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "gtest/gtest.h"
#include "test_instances.h"

namespace policy_tree {
namespace {

TEST(DatasetTest, RowExtrema) {
  Dataset ds = build_dataset({{0.0}, {1.0}}, {{1, 0}, {0, 2}});
  EXPECT_EQ(ds.to_real(ds.unit_max_reward(0)), 1.0);
  EXPECT_EQ(ds.to_real(ds.unit_max_reward(1)), 2.0);
  EXPECT_EQ(ds.to_real(ds.unit_min_reward(0)), 0.0);
  EXPECT_EQ(ds.to_real(ds.unit_min_reward(1)), 0.0);
}

TEST(DatasetTest, DistinctCounts) {
  Dataset ds = build_dataset({{0, 5}, {0, 6}, {1, 7}, {1, 8}}, {{0, 0}, {0, 0}, {0, 0}, {0, 0}});
  EXPECT_EQ(ds.distinct_count(0), 2u);
  EXPECT_EQ(ds.distinct_count(1), 4u);
  EXPECT_EQ(ds.value_rank(2, 0), 1u);
  EXPECT_EQ(ds.distinct_values(1)[3], 8.0);
}

TEST(DatasetTest, NanRewardNamesCell) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  try {
    build_dataset({{0.0}, {1.0}}, {{1, 0}, {0, nan}});
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("row 1, column 1"), std::string::npos) << e.what();
  }
}

TEST(DatasetTest, RejectsBadShapes) {
  EXPECT_THROW(build_dataset({}, {}), DataError);
  EXPECT_THROW(build_dataset({{0.0}}, {{1.0}}), DataError);              // m < 2
  EXPECT_THROW(build_dataset({{0.0}, {1.0}}, {{1, 0}}), DataError);      // row mismatch
  EXPECT_THROW(build_dataset({{0.0}, {1.0, 2.0}}, {{1, 0}, {0, 1}}), DataError);  // ragged
  const double inf = std::numeric_limits<double>::infinity();
  EXPECT_THROW(build_dataset({{inf}}, {{1, 0}}), DataError);
}

TEST(DatasetTest, ExactRewardsRoundTrip) {
  std::mt19937_64 rng(7);
  testing::InstanceShape shape{.n = 200, .p = 2, .m = 3};
  Dataset ds = testing::random_dataset(shape, rng);
  EXPECT_FALSE(ds.rewards_rounded());
  for (UnitIndex i = 0; i < ds.num_units(); ++i) {
    for (std::size_t a = 0; a < ds.num_actions(); ++a) {
      ASSERT_EQ(ds.to_real(ds.exact_reward(i, a)), ds.reward(i, a));
    }
  }
}

TEST(DatasetTest, ExtremaMatchRows) {
  std::mt19937_64 rng(11);
  Dataset ds = testing::random_dataset({.n = 50, .p = 1, .m = 5}, rng);
  for (UnitIndex i = 0; i < ds.num_units(); ++i) {
    double hi = -INFINITY;
    double lo = INFINITY;
    for (double v : ds.reward_row(i)) {
      hi = std::max(hi, v);
      lo = std::min(lo, v);
    }
    EXPECT_EQ(ds.to_real(ds.unit_max_reward(i)), hi);
    EXPECT_EQ(ds.to_real(ds.unit_min_reward(i)), lo);
    EXPECT_GE(ds.unit_max_reward(i), ds.unit_min_reward(i));
  }
}

TEST(DatasetTest, ExtremeDynamicRangeIsRounded) {
  Dataset ds = build_dataset({{0.0}, {1.0}}, {{1e300, 0}, {1e-300, 1}});
  EXPECT_TRUE(ds.rewards_rounded());
  EXPECT_EQ(ds.to_real(ds.exact_reward(0, 0)), 1e300);
  EXPECT_EQ(ds.to_real(ds.exact_reward(1, 0)), 0.0);
}

TEST(DatasetTest, FromRealRejectsOffGridValues) {
  Dataset ds = build_dataset({{0.0}}, {{1, 3}});
  EXPECT_EQ(ds.to_real(ds.from_real(10.0)), 10.0);
  EXPECT_THROW(ds.from_real(0.5), DataError);
}

}  // namespace
}  // namespace policy_tree
