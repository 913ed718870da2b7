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

#include "policy_tree/exhaustive_search.h"

#include <algorithm>
#include <stdexcept>

#include "policy_tree/depth1_scan.h"

namespace policy_tree {

std::vector<SplitCandidate> enumerate_splits(const Dataset& dataset,
                                             std::span<const UnitIndex> units, std::size_t j) {
  std::vector<double> values;
  values.reserve(units.size());
  for (UnitIndex i : units) values.push_back(dataset.covariate(i, j));
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());

  std::vector<SplitCandidate> splits;
  if (values.size() < 2) return splits;
  values.pop_back();
  splits.reserve(values.size());
  for (double v : values) {
    SplitCandidate s;
    s.covariate = j;
    s.value = v;
    for (UnitIndex i : units) {
      (dataset.covariate(i, j) <= v ? s.left : s.right).push_back(i);
    }
    splits.push_back(std::move(s));
  }
  return splits;
}

namespace {

// Index of the largest sum, ties to the smallest index.
std::size_t argmax(const std::vector<Reward>& sums) {
  std::size_t best = 0;
  for (std::size_t a = 1; a < sums.size(); ++a) {
    if (sums[a] > sums[best]) best = a;
  }
  return best;
}

// Depth-1 search that re-sums both sides of every split from scratch.
Solution best_stump(const Dataset& dataset, std::span<const UnitIndex> units, Solution best) {
  const std::size_t m = dataset.num_actions();
  std::vector<Reward> left(m), right(m);
  std::vector<double> values;
  for (std::size_t j = 0; j < dataset.num_covariates(); ++j) {
    values.clear();
    for (UnitIndex i : units) values.push_back(dataset.covariate(i, j));
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    for (std::size_t k = 0; k + 1 < values.size(); ++k) {
      std::fill(left.begin(), left.end(), Reward{});
      std::fill(right.begin(), right.end(), Reward{});
      for (UnitIndex i : units) {
        auto& side = dataset.covariate(i, j) <= values[k] ? left : right;
        for (std::size_t a = 0; a < m; ++a) side[a] += dataset.exact_reward(i, a);
      }
      const std::size_t la = argmax(left), ra = argmax(right);
      const Reward value = left[la] + right[ra];
      if (value > best.reward) {
        best = {PolicyTree::split(j, values[k], PolicyTree::leaf(la), PolicyTree::leaf(ra)), value};
      }
    }
  }
  return best;
}

}  // namespace

Solution search_exhaustive(const Dataset& dataset, std::span<const UnitIndex> units,
                           std::size_t depth) {
  if (units.empty()) throw std::invalid_argument("search_exhaustive: empty unit set");
  LeafChoice leaf = best_leaf(dataset, units);
  Solution best{PolicyTree::leaf(leaf.action), leaf.reward};
  if (depth == 0) return best;
  if (depth == 1) return best_stump(dataset, units, best);
  for (std::size_t j = 0; j < dataset.num_covariates(); ++j) {
    for (const SplitCandidate& s : enumerate_splits(dataset, units, j)) {
      Solution left = search_exhaustive(dataset, s.left, depth - 1);
      Solution right = search_exhaustive(dataset, s.right, depth - 1);
      Reward value = left.reward + right.reward;
      if (value > best.reward) {
        best = {PolicyTree::split(j, s.value, left.tree, right.tree), value};
      }
    }
  }
  return best;
}

Solution search_depth1_fast(const Dataset& dataset, std::span<const UnitIndex> units) {
  if (units.empty()) throw std::invalid_argument("search_depth1_fast: empty unit set");
  Depth1Scanner scanner(dataset);
  scanner.reset(units);
  std::vector<UnitIndex> sorted(units.begin(), units.end());
  for (std::size_t j = 0; j < dataset.num_covariates(); ++j) {
    std::stable_sort(sorted.begin(), sorted.end(), [&](UnitIndex a, UnitIndex b) {
      return dataset.covariate(a, j) < dataset.covariate(b, j);
    });
    scanner.scan_sorted(j, sorted);
  }
  return scanner.best();
}

}  // namespace policy_tree
