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

#ifndef POLICY_TREE_BOUNDED_SEARCH_H_
#define POLICY_TREE_BOUNDED_SEARCH_H_

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "policy_tree/dataset.h"
#include "policy_tree/tree.h"
#include "policy_tree/unit_sets.h"

namespace policy_tree {

inline constexpr std::size_t kDefaultCacheCapacity = 1'000'000;

// A split skipped by the transfer bound, reported to SearchOptions::on_prune.
struct PruneEvent {
  std::size_t depth;                // depth of the subproblem being solved
  std::span<const UnitIndex> units;  // its units (any order)
  std::size_t covariate;
  double value;
  Reward bound;
  Reward incumbent;
};

struct SearchOptions {
  // Skip splits whose transfer bound cannot beat the incumbent.
  bool use_bounds = true;
  // Reuse optimal subtrees of (unit set, depth) subproblems.
  bool use_cache = true;
  // Stop a subproblem once a tree earns every unit its best reward.
  bool perfect_exit = true;
  // Unit-set layout; chosen by choose_method() when unset.
  std::optional<SetMethod> method;
  std::size_t cache_capacity = kDefaultCacheCapacity;
  // Optional observer of every pruned split (for instrumentation and tests).
  std::function<void(const PruneEvent&)> on_prune;
};

struct SearchStats {
  std::uint64_t subproblems = 0;  // solved, excluding cache hits
  std::uint64_t splits_evaluated = 0;
  std::uint64_t bound_prunes = 0;
  std::uint64_t cache_hits = 0;
  std::uint64_t cache_misses = 0;
  std::uint64_t perfect_exits = 0;
  double elapsed_seconds = 0.0;

  // Counter equality, ignoring time.
  bool same_counters(const SearchStats& other) const;
};

// Exact-match memo of optimal subtrees keyed by depth and the ascending list
// of unit indices. Inserts beyond capacity are dropped; nothing is evicted.
class SubtreeCache {
 public:
  explicit SubtreeCache(std::size_t capacity = kDefaultCacheCapacity) : capacity_(capacity) {}

  // `sorted_units` must be ascending.
  const Solution* lookup(std::size_t depth, std::span<const UnitIndex> sorted_units) const;
  // Returns false when the cache is full (the entry is dropped).
  bool insert(std::size_t depth, std::span<const UnitIndex> sorted_units, const Solution& entry);

  std::size_t size() const { return entries_.size(); }
  std::size_t capacity() const { return capacity_; }

 private:
  struct Key {
    std::size_t depth;
    std::vector<UnitIndex> units;
  };
  struct KeyView {
    std::size_t depth;
    std::span<const UnitIndex> units;
  };
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(const Key& k) const { return (*this)(KeyView{k.depth, k.units}); }
    std::size_t operator()(const KeyView& k) const;
  };
  struct Equal {
    using is_transparent = void;
    static KeyView view(const Key& k) { return {k.depth, k.units}; }
    static KeyView view(const KeyView& k) { return k; }
    template <typename A, typename B>
    bool operator()(const A& a, const B& b) const {
      KeyView x = view(a);
      KeyView y = view(b);
      return x.depth == y.depth && std::equal(x.units.begin(), x.units.end(), y.units.begin(),
                                              y.units.end());
    }
  };

  std::size_t capacity_;
  std::unordered_map<Key, Solution, Hash, Equal> entries_;
};

// Upper bound on the optimum of a split reached from an already solved split
// (optimal rewards `prev_left_opt`, `prev_right_opt`) by moving `moved_units`
// from the right side to the left: the solved total plus, for each moved unit,
// the spread between its best and worst reward.
Reward transfer_bound(Reward prev_left_opt, Reward prev_right_opt,
                      std::span<const UnitIndex> moved_units, const Dataset& dataset);

// True iff `reward` equals the sum of the units' best rewards, i.e. the tree
// earning it cannot be improved at any depth.
bool is_perfect(Reward reward, std::span<const UnitIndex> units, const Dataset& dataset);

// Optimal tree of depth <= `depth` for `units`, with the same reward as
// search_exhaustive() (and, under its tie rules, the same tree). `stats` and
// `cache` are optional; without a caller cache, a fresh one is used for this
// call when options.use_cache is set. Throws std::invalid_argument for an
// empty unit set.
Solution search_bounded(const Dataset& dataset, std::span<const UnitIndex> units,
                        std::size_t depth, const SearchOptions& options = {},
                        SearchStats* stats = nullptr, SubtreeCache* cache = nullptr);

// search_bounded() over all units of the dataset.
Solution train(const Dataset& dataset, std::size_t depth, const SearchOptions& options = {},
               SearchStats* stats = nullptr);

}  // namespace policy_tree

#endif  // POLICY_TREE_BOUNDED_SEARCH_H_
