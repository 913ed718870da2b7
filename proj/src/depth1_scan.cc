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

#include "policy_tree/depth1_scan.h"

#include <algorithm>

namespace policy_tree {

Depth1Scanner::Depth1Scanner(const Dataset& dataset)
    : dataset_(&dataset),
      num_actions_(dataset.num_actions()),
      total_(num_actions_),
      left_(num_actions_),
      right_(num_actions_) {}

std::pair<std::uint32_t, Reward> Depth1Scanner::argmax(std::span<const Reward> sums) const {
  std::uint32_t best = 0;
  for (std::uint32_t a = 1; a < num_actions_; ++a) {
    if (sums[a] > sums[best]) best = a;
  }
  return {best, sums[best]};
}

void Depth1Scanner::reset(std::span<const UnitIndex> units, std::optional<Reward> stop_at) {
  std::fill(total_.begin(), total_.end(), Reward{});
  for (UnitIndex i : units) {
    auto row = dataset_->exact_reward_row(i);
    for (std::size_t a = 0; a < num_actions_; ++a) total_[a] += row[a];
  }
  auto [action, reward] = argmax(total_);
  leaf_action_ = action;
  best_reward_ = reward;
  best_is_split_ = false;
  stop_at_ = stop_at;
  splits_evaluated_ = 0;
}

void Depth1Scanner::offer(std::size_t j, double value) {
  ++splits_evaluated_;
  for (std::size_t a = 0; a < num_actions_; ++a) right_[a] = total_[a] - left_[a];
  auto [left_action, left_reward] = argmax(left_);
  auto [right_action, right_reward] = argmax(right_);
  Reward candidate = left_reward + right_reward;
  if (candidate > best_reward_) {
    best_reward_ = candidate;
    best_is_split_ = true;
    best_covariate_ = j;
    best_value_ = value;
    best_left_action_ = left_action;
    best_right_action_ = right_action;
  }
}

void Depth1Scanner::scan_sorted(std::size_t j, std::span<const UnitIndex> sorted) {
  if (done() || sorted.size() < 2) return;
  std::fill(left_.begin(), left_.end(), Reward{});
  for (std::size_t k = 0; k + 1 < sorted.size(); ++k) {
    auto row = dataset_->exact_reward_row(sorted[k]);
    for (std::size_t a = 0; a < num_actions_; ++a) left_[a] += row[a];
    if (dataset_->value_rank(sorted[k], j) != dataset_->value_rank(sorted[k + 1], j)) {
      offer(j, dataset_->covariate(sorted[k], j));
      if (done()) return;
    }
  }
}

void Depth1Scanner::scan_two_valued(std::size_t j, std::span<const UnitIndex> units) {
  if (done()) return;
  std::fill(left_.begin(), left_.end(), Reward{});
  std::size_t low = 0;
  for (UnitIndex i : units) {
    if (dataset_->value_rank(i, j) != 0) continue;
    ++low;
    auto row = dataset_->exact_reward_row(i);
    for (std::size_t a = 0; a < num_actions_; ++a) left_[a] += row[a];
  }
  if (low == 0 || low == units.size()) return;
  offer(j, dataset_->distinct_values(j)[0]);
}

Solution Depth1Scanner::best() const {
  if (!best_is_split_) return {PolicyTree::leaf(leaf_action_), best_reward_};
  return {PolicyTree::split(best_covariate_, best_value_, PolicyTree::leaf(best_left_action_),
                            PolicyTree::leaf(best_right_action_)),
          best_reward_};
}

}  // namespace policy_tree
