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

#ifndef POLICY_TREE_DEPTH1_SCAN_H_
#define POLICY_TREE_DEPTH1_SCAN_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "policy_tree/dataset.h"
#include "policy_tree/tree.h"

namespace policy_tree {

// Depth-1 search by threshold sweeps with running per-action sums.
//
// After reset(units), each scan_*() call offers every split of one covariate;
// the best candidate so far (starting from the best leaf) is kept and only
// replaced by a strictly better one, so candidates offered in (covariate,
// threshold) order give the same tie-breaking as the plain recursion. No unit
// set is rebuilt per threshold.
class Depth1Scanner {
 public:
  explicit Depth1Scanner(const Dataset& dataset);

  // Starts a new subproblem over `units` with the best leaf as incumbent.
  // When `stop_at` is set, scanning stops as soon as the incumbent reaches it
  // (used with the perfect-tree reward).
  void reset(std::span<const UnitIndex> units, std::optional<Reward> stop_at = std::nullopt);

  // `sorted` holds the subproblem's units ordered by covariate j.
  void scan_sorted(std::size_t j, std::span<const UnitIndex> sorted);
  // Covariate j must have exactly two distinct values in the dataset; `units`
  // is the subproblem's unit set in any order.
  void scan_two_valued(std::size_t j, std::span<const UnitIndex> units);

  bool done() const { return stop_at_.has_value() && best_reward_ == *stop_at_; }
  Reward best_reward() const { return best_reward_; }
  std::uint64_t splits_evaluated() const { return splits_evaluated_; }
  Solution best() const;

 private:
  // Best action and its sum among sums[0..m).
  std::pair<std::uint32_t, Reward> argmax(std::span<const Reward> sums) const;
  void offer(std::size_t j, double value);

  const Dataset* dataset_;
  std::size_t num_actions_;
  std::vector<Reward> total_;
  std::vector<Reward> left_;
  std::vector<Reward> right_;
  std::optional<Reward> stop_at_;
  std::uint64_t splits_evaluated_ = 0;

  Reward best_reward_;
  bool best_is_split_ = false;
  std::uint32_t leaf_action_ = 0;
  std::size_t best_covariate_ = 0;
  double best_value_ = 0.0;
  std::uint32_t best_left_action_ = 0;
  std::uint32_t best_right_action_ = 0;
};

}  // namespace policy_tree

#endif  // POLICY_TREE_DEPTH1_SCAN_H_
