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

#ifndef POLICY_TREE_UNIT_SETS_H_
#define POLICY_TREE_UNIT_SETS_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "policy_tree/dataset.h"

namespace policy_tree {

// Covariates with fewer distinct values than this are sorted by counting
// sort; the rest by radix sort. The same number drives choose_method().
inline constexpr std::size_t kFewDistinctValues = 30;

enum class SetMethod {
  kSortedFamily,  // "Method 1": one sorted vector per covariate.
  kSingleSet,     // "Method 2": one vector, re-sorted per covariate.
};

// Method 2 when a strict majority of covariates have at most
// kFewDistinctValues distinct values, otherwise Method 1.
SetMethod choose_method(const Dataset& dataset);

// Stable sorts of `units` by the value of covariate j. Both write the result
// back into `units` and use `scratch` (same size) as the second buffer. Ties
// keep their input order, so ascending-index input gives (x[i][j], i) order.
void counting_sort_by_covariate(const Dataset& dataset, std::size_t j,
                                std::span<UnitIndex> units, std::span<UnitIndex> scratch);
void radix_sort_by_covariate(const Dataset& dataset, std::size_t j, std::span<UnitIndex> units,
                             std::span<UnitIndex> scratch);

// Counting sort when covariate j has < kFewDistinctValues distinct values,
// radix sort otherwise.
void sort_units_by_covariate(const Dataset& dataset, std::size_t j, std::span<UnitIndex> units,
                             std::span<UnitIndex> scratch);

// Method 1: a unit subset held as p vectors, vector j sorted by (x[i][j], i).
//
// Insertion and removal work one unit at a time on all p vectors, like a
// sorted flat set: a binary search for the slot plus an element shift.
class SortedSetFamily {
 public:
  explicit SortedSetFamily(const Dataset& dataset);

  // Replaces the contents with `units` (any order, distinct).
  void assign(std::span<const UnitIndex> units);
  // Replaces the contents with a copy of `other` (same dataset).
  void assign_sorted(const SortedSetFamily& other);
  void clear();

  const Dataset& dataset() const { return *dataset_; }
  std::size_t size() const { return lists_.front().size(); }
  bool empty() const { return size() == 0; }
  std::span<const UnitIndex> sorted_by(std::size_t j) const { return lists_[j]; }

  void insert(UnitIndex unit);
  void erase(UnitIndex unit);

 private:
  std::uint64_t key(UnitIndex unit, std::size_t j) const {
    return (std::uint64_t{dataset_->value_rank(unit, j)} << 32) | unit;
  }

  const Dataset* dataset_;
  std::vector<std::vector<UnitIndex>> lists_;
  std::vector<UnitIndex> scratch_;
};

// Moves every unit with x[i][j] <= threshold from `right` into `left`, keeping
// all 2p vectors sorted, and appends the moved units to `moved` (in covariate
// j order). Throws std::invalid_argument if `left` already holds a unit with
// x[i][j] > threshold (thresholds must only increase).
void family_split_advance(SortedSetFamily& left, SortedSetFamily& right, std::size_t j,
                          double threshold, std::vector<UnitIndex>& moved);

// Method 2: a unit subset held once, re-sorted on demand.
//
// members() is always in ascending unit order; order() is the current
// arrangement produced by the last sort_by_covariate() or binary_partition().
// Buffers are sized for the whole dataset at construction and never grow.
class SingleSet {
 public:
  explicit SingleSet(const Dataset& dataset);

  // Replaces the contents; `units` must be distinct, any order.
  void assign(std::span<const UnitIndex> units);

  std::size_t size() const { return members_.size(); }
  std::span<const UnitIndex> members() const { return members_; }
  std::span<const UnitIndex> order() const { return order_; }
  std::optional<std::size_t> sorted_covariate() const { return sorted_covariate_; }

  // order() becomes members sorted by (x[i][j], i).
  void sort_by_covariate(std::size_t j);

  // For a covariate with exactly two distinct values in the whole dataset:
  // order() becomes [units with the smaller value..., the rest...], each part
  // in ascending unit order, in one pass without sorting. Returns the size of
  // the first part. Any other covariate falls back to sort_by_covariate() and
  // returns the number of units holding the subset's smallest value.
  std::size_t binary_partition(std::size_t j);

 private:
  const Dataset* dataset_;
  std::vector<UnitIndex> members_;
  std::vector<UnitIndex> order_;
  std::vector<UnitIndex> scratch_;
  std::optional<std::size_t> sorted_covariate_;
};

}  // namespace policy_tree

#endif  // POLICY_TREE_UNIT_SETS_H_
