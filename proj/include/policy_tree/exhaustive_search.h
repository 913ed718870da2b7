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

#ifndef POLICY_TREE_EXHAUSTIVE_SEARCH_H_
#define POLICY_TREE_EXHAUSTIVE_SEARCH_H_

#include <cstddef>
#include <span>
#include <vector>

#include "policy_tree/dataset.h"
#include "policy_tree/tree.h"

namespace policy_tree {

// One nondegenerate split of a unit set: left = {i : x[i][covariate] <= value}.
struct SplitCandidate {
  std::size_t covariate = 0;
  double value = 0.0;
  std::vector<UnitIndex> left;
  std::vector<UnitIndex> right;
};

// Every split of `units` on covariate j, one per distinct observed value
// except the largest, in ascending threshold order. Subsets keep the input
// order of `units`.
std::vector<SplitCandidate> enumerate_splits(const Dataset& dataset,
                                             std::span<const UnitIndex> units, std::size_t j);

// Optimal tree of depth <= `depth` by plain recursion over all splits, with
// no pruning, caching or early exit. This is the reference the optimized
// search is checked against; it is exponential and only meant for small
// inputs.
//
// Ties: a leaf beats a split of equal reward; among splits the first in
// (covariate, threshold) order wins. Throws std::invalid_argument for an
// empty unit set.
Solution search_exhaustive(const Dataset& dataset, std::span<const UnitIndex> units,
                           std::size_t depth);

// Depth-1 optimum by one sort and one running-sum sweep per covariate. Same
// result (tree and reward) as search_exhaustive(dataset, units, 1).
Solution search_depth1_fast(const Dataset& dataset, std::span<const UnitIndex> units);

}  // namespace policy_tree

#endif  // POLICY_TREE_EXHAUSTIVE_SEARCH_H_
