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

#include "policy_tree/unit_sets.h"

#include <algorithm>
#include <array>
#include <stdexcept>

namespace policy_tree {

SetMethod choose_method(const Dataset& dataset) {
  std::size_t few = 0;
  for (std::size_t j = 0; j < dataset.num_covariates(); ++j) {
    if (dataset.distinct_count(j) <= kFewDistinctValues) ++few;
  }
  return 2 * few > dataset.num_covariates() ? SetMethod::kSingleSet : SetMethod::kSortedFamily;
}

void counting_sort_by_covariate(const Dataset& dataset, std::size_t j,
                                std::span<UnitIndex> units, std::span<UnitIndex> scratch) {
  const std::size_t buckets = dataset.distinct_count(j);
  // Small fixed array on the common path; distinct counts above it only occur
  // when a caller forces counting sort.
  std::array<std::size_t, kFewDistinctValues + 1> small{};
  std::vector<std::size_t> large;
  std::span<std::size_t> start(small.data(), small.size());
  if (buckets + 1 > small.size()) {
    large.assign(buckets + 1, 0);
    start = large;
  }
  for (UnitIndex i : units) ++start[dataset.value_rank(i, j) + 1];
  for (std::size_t b = 1; b <= buckets; ++b) start[b] += start[b - 1];
  for (UnitIndex i : units) scratch[start[dataset.value_rank(i, j)]++] = i;
  std::copy(scratch.begin(), scratch.begin() + units.size(), units.begin());
}

void radix_sort_by_covariate(const Dataset& dataset, std::size_t j, std::span<UnitIndex> units,
                             std::span<UnitIndex> scratch) {
  const std::size_t n = units.size();
  if (n < 2) return;
  const std::uint32_t max_rank = static_cast<std::uint32_t>(dataset.distinct_count(j) - 1);
  std::span<UnitIndex> src = units;
  std::span<UnitIndex> dst = scratch.first(n);
  std::array<std::size_t, 256> count;
  for (unsigned shift = 0; shift < 32 && (max_rank >> shift) != 0; shift += 8) {
    count.fill(0);
    for (UnitIndex i : src) ++count[(dataset.value_rank(i, j) >> shift) & 0xff];
    // A pass where every key shares the byte would only copy.
    if (std::find(count.begin(), count.end(), n) != count.end()) continue;
    std::size_t total = 0;
    for (auto& c : count) {
      std::size_t here = c;
      c = total;
      total += here;
    }
    for (UnitIndex i : src) dst[count[(dataset.value_rank(i, j) >> shift) & 0xff]++] = i;
    std::swap(src, dst);
  }
  if (src.data() != units.data()) std::copy(src.begin(), src.end(), units.begin());
}

void sort_units_by_covariate(const Dataset& dataset, std::size_t j, std::span<UnitIndex> units,
                             std::span<UnitIndex> scratch) {
  if (dataset.distinct_count(j) < kFewDistinctValues) {
    counting_sort_by_covariate(dataset, j, units, scratch);
  } else {
    radix_sort_by_covariate(dataset, j, units, scratch);
  }
}

// SortedSetFamily

SortedSetFamily::SortedSetFamily(const Dataset& dataset)
    : dataset_(&dataset), lists_(dataset.num_covariates()) {
  for (auto& list : lists_) list.reserve(dataset.num_units());
  scratch_.reserve(dataset.num_units());
}

void SortedSetFamily::assign(std::span<const UnitIndex> units) {
  std::vector<UnitIndex> ascending(units.begin(), units.end());
  std::sort(ascending.begin(), ascending.end());
  scratch_.resize(ascending.size());
  for (std::size_t j = 0; j < lists_.size(); ++j) {
    lists_[j].assign(ascending.begin(), ascending.end());
    sort_units_by_covariate(*dataset_, j, lists_[j], scratch_);
  }
}

void SortedSetFamily::assign_sorted(const SortedSetFamily& other) {
  for (std::size_t j = 0; j < lists_.size(); ++j) {
    lists_[j].assign(other.lists_[j].begin(), other.lists_[j].end());
  }
}

void SortedSetFamily::clear() {
  for (auto& list : lists_) list.clear();
}

void SortedSetFamily::insert(UnitIndex unit) {
  for (std::size_t j = 0; j < lists_.size(); ++j) {
    auto& list = lists_[j];
    const std::uint64_t k = key(unit, j);
    auto pos = std::lower_bound(list.begin(), list.end(), k,
                                [&](UnitIndex a, std::uint64_t b) { return key(a, j) < b; });
    list.insert(pos, unit);
  }
}

void SortedSetFamily::erase(UnitIndex unit) {
  for (std::size_t j = 0; j < lists_.size(); ++j) {
    auto& list = lists_[j];
    const std::uint64_t k = key(unit, j);
    auto pos = std::lower_bound(list.begin(), list.end(), k,
                                [&](UnitIndex a, std::uint64_t b) { return key(a, j) < b; });
    if (pos == list.end() || *pos != unit) throw std::logic_error("erase: unit not in set");
    list.erase(pos);
  }
}

void family_split_advance(SortedSetFamily& left, SortedSetFamily& right, std::size_t j,
                          double threshold, std::vector<UnitIndex>& moved) {
  const Dataset& ds = left.dataset();
  auto left_j = left.sorted_by(j);
  if (!left_j.empty() && ds.covariate(left_j.back(), j) > threshold) {
    throw std::invalid_argument("family_split_advance: threshold below current split");
  }
  // Units crossing the threshold form a prefix of right's covariate-j vector.
  while (!right.empty()) {
    UnitIndex front = right.sorted_by(j).front();
    if (ds.covariate(front, j) > threshold) break;
    right.erase(front);
    left.insert(front);
    moved.push_back(front);
  }
}

// SingleSet

SingleSet::SingleSet(const Dataset& dataset) : dataset_(&dataset) {
  members_.reserve(dataset.num_units());
  order_.reserve(dataset.num_units());
  scratch_.reserve(dataset.num_units());
}

void SingleSet::assign(std::span<const UnitIndex> units) {
  members_.assign(units.begin(), units.end());
  if (!std::is_sorted(members_.begin(), members_.end())) {
    std::sort(members_.begin(), members_.end());
  }
  order_.assign(members_.begin(), members_.end());
  scratch_.resize(members_.size());
  sorted_covariate_.reset();
}

void SingleSet::sort_by_covariate(std::size_t j) {
  order_.assign(members_.begin(), members_.end());
  sort_units_by_covariate(*dataset_, j, order_, scratch_);
  sorted_covariate_ = j;
}

std::size_t SingleSet::binary_partition(std::size_t j) {
  if (dataset_->distinct_count(j) != 2) {
    sort_by_covariate(j);
    std::size_t k = 0;
    const std::uint32_t low = order_.empty() ? 0 : dataset_->value_rank(order_.front(), j);
    while (k < order_.size() && dataset_->value_rank(order_[k], j) == low) ++k;
    return k;
  }
  // Low-valued units fill order_ from the front, the rest go to scratch_ and
  // are appended; both halves keep ascending unit order.
  std::size_t low = 0;
  std::size_t high = 0;
  for (UnitIndex i : members_) {
    if (dataset_->value_rank(i, j) == 0) {
      order_[low++] = i;
    } else {
      scratch_[high++] = i;
    }
  }
  std::copy(scratch_.begin(), scratch_.begin() + high, order_.begin() + low);
  sorted_covariate_ = j;
  return low;
}

}  // namespace policy_tree
