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

#ifndef POLICY_TREE_TREE_H_
#define POLICY_TREE_TREE_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "policy_tree/dataset.h"

namespace policy_tree {

// A binary policy tree. Split nodes send a unit left iff x[covariate] <= value.
//
// Nodes are stored in preorder in one vector (root at index 0), so trees are
// cheap values that can be copied and compared.
class PolicyTree {
 public:
  struct Node {
    bool is_leaf = true;
    std::uint32_t action = 0;     // leaf only
    std::uint32_t covariate = 0;  // split only
    double value = 0.0;           // split only
    std::uint32_t left = 0;       // split only: node indices
    std::uint32_t right = 0;

    friend bool operator==(const Node&, const Node&) = default;
  };

  PolicyTree() : nodes_{Node{}} {}

  static PolicyTree leaf(std::size_t action);
  static PolicyTree split(std::size_t covariate, double value, const PolicyTree& left,
                          const PolicyTree& right);

  const Node& root() const { return nodes_.front(); }
  const Node& node(std::size_t index) const { return nodes_[index]; }
  std::span<const Node> nodes() const { return nodes_; }
  std::size_t size() const { return nodes_.size(); }

  // Maximum number of split nodes on a root-to-leaf path.
  std::size_t depth() const;

  // Copies of the left / right subtrees of a split root.
  PolicyTree left_subtree() const;
  PolicyTree right_subtree() const;

  friend bool operator==(const PolicyTree&, const PolicyTree&) = default;

 private:
  PolicyTree subtree(std::uint32_t root) const;
  std::vector<Node> nodes_;
};

// True when every split covariate is < num_covariates, every leaf action is
// < num_actions and depth() <= max_depth.
bool is_valid_tree(const PolicyTree& tree, std::size_t num_covariates, std::size_t num_actions,
                   std::size_t max_depth);

// The action the tree assigns to a covariate vector.
std::uint32_t assign_action(const PolicyTree& tree, std::span<const double> x_row);

// Sum over `units` of the reward of each unit's assigned action.
Reward tree_reward_exact(const PolicyTree& tree, const Dataset& dataset,
                         std::span<const UnitIndex> units);
double tree_reward(const PolicyTree& tree, const Dataset& dataset,
                   std::span<const UnitIndex> units);

// A tree together with its exact reward on the units it was built for.
struct Solution {
  PolicyTree tree;
  Reward reward;
};

struct LeafChoice {
  std::uint32_t action = 0;
  Reward reward;
};

// Best single action for `units` (the depth-0 solution). Ties go to the
// smallest action index. Throws std::invalid_argument for an empty set.
LeafChoice best_leaf(const Dataset& dataset, std::span<const UnitIndex> units);

// Sum of unit_max_reward over `units`: the reward of a perfect tree and an
// upper bound on the reward of any tree.
Reward max_reward_sum(const Dataset& dataset, std::span<const UnitIndex> units);

// All unit indices 0..n-1.
std::vector<UnitIndex> all_units(const Dataset& dataset);

}  // namespace policy_tree

#endif  // POLICY_TREE_TREE_H_
