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

#include "policy_tree/tree.h"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace policy_tree {

PolicyTree PolicyTree::leaf(std::size_t action) {
  PolicyTree t;
  t.nodes_.front().action = static_cast<std::uint32_t>(action);
  return t;
}

PolicyTree PolicyTree::split(std::size_t covariate, double value, const PolicyTree& left,
                             const PolicyTree& right) {
  PolicyTree t;
  t.nodes_.reserve(1 + left.size() + right.size());
  Node& root = t.nodes_.front();
  root.is_leaf = false;
  root.covariate = static_cast<std::uint32_t>(covariate);
  root.value = value;
  root.left = 1;
  root.right = static_cast<std::uint32_t>(1 + left.size());
  auto append = [&t](const PolicyTree& sub, std::uint32_t offset) {
    for (Node n : sub.nodes_) {
      if (!n.is_leaf) {
        n.left += offset;
        n.right += offset;
      }
      t.nodes_.push_back(n);
    }
  };
  append(left, 1);
  append(right, root.right);
  return t;
}

std::size_t PolicyTree::depth() const {
  // Preorder layout: children always follow their parent.
  std::vector<std::size_t> d(nodes_.size(), 0);
  std::size_t best = 0;
  for (std::size_t k = 0; k < nodes_.size(); ++k) {
    const Node& n = nodes_[k];
    if (n.is_leaf) {
      best = std::max(best, d[k]);
    } else {
      d[n.left] = d[k] + 1;
      d[n.right] = d[k] + 1;
    }
  }
  return best;
}

PolicyTree PolicyTree::subtree(std::uint32_t root) const {
  PolicyTree t;
  t.nodes_.clear();
  // The subtree rooted at `root` occupies a contiguous preorder range.
  std::uint32_t end = root;
  std::vector<std::uint32_t> stack{root};
  while (!stack.empty()) {
    std::uint32_t k = stack.back();
    stack.pop_back();
    end = std::max(end, k);
    if (!nodes_[k].is_leaf) {
      stack.push_back(nodes_[k].left);
      stack.push_back(nodes_[k].right);
    }
  }
  for (std::uint32_t k = root; k <= end; ++k) {
    Node n = nodes_[k];
    if (!n.is_leaf) {
      n.left -= root;
      n.right -= root;
    }
    t.nodes_.push_back(n);
  }
  return t;
}

PolicyTree PolicyTree::left_subtree() const {
  if (root().is_leaf) throw std::logic_error("leaf has no subtrees");
  return subtree(root().left);
}

PolicyTree PolicyTree::right_subtree() const {
  if (root().is_leaf) throw std::logic_error("leaf has no subtrees");
  return subtree(root().right);
}

bool is_valid_tree(const PolicyTree& tree, std::size_t num_covariates, std::size_t num_actions,
                   std::size_t max_depth) {
  for (const auto& n : tree.nodes()) {
    if (n.is_leaf ? n.action >= num_actions : n.covariate >= num_covariates) return false;
  }
  return tree.depth() <= max_depth;
}

std::uint32_t assign_action(const PolicyTree& tree, std::span<const double> x_row) {
  const PolicyTree::Node* n = &tree.root();
  while (!n->is_leaf) {
    n = &tree.node(x_row[n->covariate] <= n->value ? n->left : n->right);
  }
  return n->action;
}

Reward tree_reward_exact(const PolicyTree& tree, const Dataset& dataset,
                         std::span<const UnitIndex> units) {
  Reward total;
  for (UnitIndex i : units) {
    total += dataset.exact_reward(i, assign_action(tree, dataset.covariate_row(i)));
  }
  return total;
}

double tree_reward(const PolicyTree& tree, const Dataset& dataset,
                   std::span<const UnitIndex> units) {
  return dataset.to_real(tree_reward_exact(tree, dataset, units));
}

LeafChoice best_leaf(const Dataset& dataset, std::span<const UnitIndex> units) {
  if (units.empty()) throw std::invalid_argument("best_leaf: empty unit set");
  const std::size_t m = dataset.num_actions();
  std::vector<Reward> sums(m);
  for (UnitIndex i : units) {
    auto row = dataset.exact_reward_row(i);
    for (std::size_t a = 0; a < m; ++a) sums[a] += row[a];
  }
  LeafChoice best{0, sums[0]};
  for (std::size_t a = 1; a < m; ++a) {
    if (sums[a] > best.reward) best = {static_cast<std::uint32_t>(a), sums[a]};
  }
  return best;
}

Reward max_reward_sum(const Dataset& dataset, std::span<const UnitIndex> units) {
  Reward total;
  for (UnitIndex i : units) total += dataset.unit_max_reward(i);
  return total;
}

std::vector<UnitIndex> all_units(const Dataset& dataset) {
  std::vector<UnitIndex> units(dataset.num_units());
  std::iota(units.begin(), units.end(), UnitIndex{0});
  return units;
}

}  // namespace policy_tree
