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

#include "policy_tree/bounded_search.h"

#include <algorithm>
#include <chrono>
#include <memory>
#include <stdexcept>

#include "policy_tree/depth1_scan.h"

namespace policy_tree {

bool SearchStats::same_counters(const SearchStats& o) const {
  return subproblems == o.subproblems && splits_evaluated == o.splits_evaluated &&
         bound_prunes == o.bound_prunes && cache_hits == o.cache_hits &&
         cache_misses == o.cache_misses && perfect_exits == o.perfect_exits;
}

std::size_t SubtreeCache::Hash::operator()(const KeyView& k) const {
  // FNV-1a over the depth and indices.
  std::uint64_t h = 14695981039346656037ull ^ k.depth;
  h *= 1099511628211ull;
  for (UnitIndex i : k.units) {
    h ^= i;
    h *= 1099511628211ull;
  }
  return static_cast<std::size_t>(h ^ (h >> 29));
}

const Solution* SubtreeCache::lookup(std::size_t depth,
                                     std::span<const UnitIndex> sorted_units) const {
  auto it = entries_.find(KeyView{depth, sorted_units});
  return it == entries_.end() ? nullptr : &it->second;
}

bool SubtreeCache::insert(std::size_t depth, std::span<const UnitIndex> sorted_units,
                          const Solution& entry) {
  if (entries_.size() >= capacity_) return false;
  entries_.try_emplace(Key{depth, {sorted_units.begin(), sorted_units.end()}}, entry);
  return true;
}

Reward transfer_bound(Reward prev_left_opt, Reward prev_right_opt,
                      std::span<const UnitIndex> moved_units, const Dataset& dataset) {
  Reward bound = prev_left_opt + prev_right_opt;
  for (UnitIndex i : moved_units) {
    bound += dataset.unit_max_reward(i) - dataset.unit_min_reward(i);
  }
  return bound;
}

bool is_perfect(Reward reward, std::span<const UnitIndex> units, const Dataset& dataset) {
  return reward == max_reward_sum(dataset, units);
}

namespace {

// One top-level search. Owns every buffer it needs, allocated up front: one
// workspace per remaining depth, since a subproblem at depth d only ever
// recurses into depth d - 1.
class Searcher {
 public:
  Searcher(const Dataset& dataset, std::size_t depth, const SearchOptions& options,
           SearchStats& stats, SubtreeCache* cache)
      : ds_(dataset),
        options_(options),
        method_(options.method.value_or(choose_method(dataset))),
        stats_(stats),
        cache_(options.use_cache ? cache : nullptr),
        scanner_(dataset),
        scan_set_(dataset) {
    levels_.reserve(depth + 1);
    for (std::size_t d = 0; d <= depth; ++d) levels_.emplace_back(dataset, method_, d);
  }

  Solution run(std::span<const UnitIndex> units, std::size_t depth) {
    std::vector<UnitIndex> ascending(units.begin(), units.end());
    std::sort(ascending.begin(), ascending.end());
    if (method_ == SetMethod::kSingleSet) return solve_units(ascending, depth);
    SortedSetFamily root(ds_);
    root.assign(ascending);
    return solve_family(root, depth);
  }

 private:
  struct Level {
    Level(const Dataset& dataset, SetMethod method, std::size_t depth) : set(dataset) {
      if (method == SetMethod::kSortedFamily && depth >= 2) {
        fam_left = std::make_unique<SortedSetFamily>(dataset);
        fam_right = std::make_unique<SortedSetFamily>(dataset);
      }
      if (method == SetMethod::kSingleSet && depth >= 2) {
        left.reserve(dataset.num_units());
        right.reserve(dataset.num_units());
      }
    }
    SingleSet set;
    std::vector<UnitIndex> left;
    std::vector<UnitIndex> right;
    std::unique_ptr<SortedSetFamily> fam_left;
    std::unique_ptr<SortedSetFamily> fam_right;
    std::vector<UnitIndex> key;
    std::vector<UnitIndex> moved;
  };

  // Sweep state for one covariate: the last solved split's total and the
  // spread (max - min) of units moved left since then.
  struct Anchor {
    bool set = false;
    Reward solved_total;
    Reward moved_spread;
  };

  std::optional<Reward> perfect_target(std::span<const UnitIndex> units) const {
    if (!options_.perfect_exit) return std::nullopt;
    return max_reward_sum(ds_, units);
  }

  // Returns true if the split (j, value) of `units` must be solved; false if
  // pruned.
  bool admit(Anchor& anchor, std::span<const UnitIndex> moved, Reward incumbent,
             std::size_t d, std::span<const UnitIndex> units, std::size_t j, double value) {
    if (!options_.use_bounds) return true;
    for (UnitIndex i : moved) anchor.moved_spread += ds_.unit_max_reward(i) - ds_.unit_min_reward(i);
    if (!anchor.set) return true;
    const Reward bound = anchor.solved_total + anchor.moved_spread;
    if (bound > incumbent) return true;
    ++stats_.bound_prunes;
    if (options_.on_prune) options_.on_prune({d, units, j, value, bound, incumbent});
    return false;
  }

  // Records a solved split; returns true when the incumbent became perfect.
  bool accept(Anchor& anchor, std::size_t j, double value, Solution&& left, Solution&& right,
              Solution& incumbent, const std::optional<Reward>& target) {
    ++stats_.splits_evaluated;
    Reward total = left.reward + right.reward;
    anchor = {true, total, Reward{}};
    if (total <= incumbent.reward) return false;
    incumbent = {PolicyTree::split(j, value, left.tree, right.tree), total};
    if (target && incumbent.reward == *target) {
      ++stats_.perfect_exits;
      return true;
    }
    return false;
  }

  const Solution* cache_lookup(std::size_t d, std::span<const UnitIndex> key) {
    if (cache_ == nullptr || d == 0) return nullptr;
    const Solution* hit = cache_->lookup(d, key);
    ++(hit ? stats_.cache_hits : stats_.cache_misses);
    return hit;
  }

  void cache_store(std::size_t d, std::span<const UnitIndex> key, const Solution& s) {
    if (cache_ != nullptr && d > 0) cache_->insert(d, key, s);
  }

  Solution solve_leaf(std::span<const UnitIndex> units) {
    ++stats_.subproblems;
    LeafChoice leaf = best_leaf(ds_, units);
    return {PolicyTree::leaf(leaf.action), leaf.reward};
  }

  // Depth 1 with the set given as sorted lists (Method 1) or plain units.
  template <typename SortedFor>
  Solution solve_depth1(std::span<const UnitIndex> units, SortedFor&& sorted_for) {
    ++stats_.subproblems;
    auto target = perfect_target(units);
    scanner_.reset(units, target);
    if (scanner_.done()) {
      ++stats_.perfect_exits;
      return scanner_.best();
    }
    for (std::size_t j = 0; j < ds_.num_covariates() && !scanner_.done(); ++j) {
      if (ds_.distinct_count(j) == 2) {
        scanner_.scan_two_valued(j, units);
      } else {
        scanner_.scan_sorted(j, sorted_for(j));
      }
    }
    if (scanner_.done()) ++stats_.perfect_exits;
    stats_.splits_evaluated += scanner_.splits_evaluated();
    return scanner_.best();
  }

  // Method 2. `units` is ascending.
  Solution solve_units(std::span<const UnitIndex> units, std::size_t d) {
    if (d == 0) return solve_leaf(units);
    if (const Solution* hit = cache_lookup(d, units)) return *hit;
    Solution result;
    if (d == 1) {
      result = solve_depth1(units, [&](std::size_t j) {
        scan_set_.assign(units);
        scan_set_.sort_by_covariate(j);
        return scan_set_.order();
      });
    } else {
      result = sweep_units(units, d);
    }
    cache_store(d, units, result);
    return result;
  }

  Solution sweep_units(std::span<const UnitIndex> units, std::size_t d) {
    ++stats_.subproblems;
    LeafChoice leaf = best_leaf(ds_, units);
    Solution incumbent{PolicyTree::leaf(leaf.action), leaf.reward};
    auto target = perfect_target(units);
    if (target && incumbent.reward == *target) {
      ++stats_.perfect_exits;
      return incumbent;
    }
    Level& level = levels_[d];
    level.set.assign(units);
    const std::size_t n = units.size();
    for (std::size_t j = 0; j < ds_.num_covariates(); ++j) {
      Anchor anchor;
      if (ds_.distinct_count(j) == 2) {
        std::size_t k = level.set.binary_partition(j);
        if (k == 0 || k == n) continue;
        auto order = level.set.order();
        if (!admit(anchor, order.first(k), incumbent.reward, d, units, j,
                   ds_.distinct_values(j)[0])) {
          continue;
        }
        Solution left = solve_units(order.first(k), d - 1);
        Solution right = solve_units(order.subspan(k), d - 1);
        if (accept(anchor, j, ds_.distinct_values(j)[0], std::move(left), std::move(right),
                   incumbent, target)) {
          return incumbent;
        }
        continue;
      }
      level.set.sort_by_covariate(j);
      auto order = level.set.order();
      std::size_t anchor_pos = 0;
      for (std::size_t k = 1; k < n; ++k) {
        std::uint32_t rank = ds_.value_rank(order[k - 1], j);
        if (rank == ds_.value_rank(order[k], j)) continue;
        auto moved = order.subspan(anchor_pos, k - anchor_pos);
        anchor_pos = k;
        if (!admit(anchor, moved, incumbent.reward, d, units, j,
                   ds_.covariate(order[k - 1], j))) {
          continue;
        }
        level.left.clear();
        level.right.clear();
        for (UnitIndex i : units) {
          (ds_.value_rank(i, j) <= rank ? level.left : level.right).push_back(i);
        }
        Solution left = solve_units(level.left, d - 1);
        Solution right = solve_units(level.right, d - 1);
        if (accept(anchor, j, ds_.covariate(order[k - 1], j), std::move(left), std::move(right),
                   incumbent, target)) {
          return incumbent;
        }
      }
    }
    return incumbent;
  }

  // Method 1.
  Solution solve_family(const SortedSetFamily& fam, std::size_t d) {
    if (d == 0) return solve_leaf(fam.sorted_by(0));
    Level& level = levels_[d];
    std::span<const UnitIndex> key;
    if (cache_ != nullptr) {
      auto any = fam.sorted_by(0);
      level.key.assign(any.begin(), any.end());
      std::sort(level.key.begin(), level.key.end());
      key = level.key;
      if (const Solution* hit = cache_lookup(d, key)) return *hit;
    }
    Solution result;
    if (d == 1) {
      result = solve_depth1(fam.sorted_by(0), [&](std::size_t j) { return fam.sorted_by(j); });
    } else {
      result = sweep_family(fam, d);
    }
    // `key` lives in level.key, which deeper recursion does not touch.
    cache_store(d, key, result);
    return result;
  }

  Solution sweep_family(const SortedSetFamily& fam, std::size_t d) {
    ++stats_.subproblems;
    auto units = fam.sorted_by(0);
    LeafChoice leaf = best_leaf(ds_, units);
    Solution incumbent{PolicyTree::leaf(leaf.action), leaf.reward};
    auto target = perfect_target(units);
    if (target && incumbent.reward == *target) {
      ++stats_.perfect_exits;
      return incumbent;
    }
    Level& level = levels_[d];
    SortedSetFamily& left = *level.fam_left;
    SortedSetFamily& right = *level.fam_right;
    for (std::size_t j = 0; j < ds_.num_covariates(); ++j) {
      auto sorted = fam.sorted_by(j);
      if (ds_.value_rank(sorted.front(), j) == ds_.value_rank(sorted.back(), j)) continue;
      left.clear();
      right.assign_sorted(fam);
      Anchor anchor;
      for (std::size_t k = 1; k < sorted.size(); ++k) {
        if (ds_.value_rank(sorted[k - 1], j) == ds_.value_rank(sorted[k], j)) continue;
        const double value = ds_.covariate(sorted[k - 1], j);
        level.moved.clear();
        family_split_advance(left, right, j, value, level.moved);
        if (!admit(anchor, level.moved, incumbent.reward, d, units, j, value)) continue;
        Solution l = solve_family(left, d - 1);
        Solution r = solve_family(right, d - 1);
        if (accept(anchor, j, value, std::move(l), std::move(r), incumbent, target)) {
          return incumbent;
        }
      }
    }
    return incumbent;
  }

  const Dataset& ds_;
  const SearchOptions& options_;
  SetMethod method_;
  SearchStats& stats_;
  SubtreeCache* cache_;
  Depth1Scanner scanner_;
  SingleSet scan_set_;
  std::vector<Level> levels_;
};

}  // namespace

Solution search_bounded(const Dataset& dataset, std::span<const UnitIndex> units,
                        std::size_t depth, const SearchOptions& options, SearchStats* stats,
                        SubtreeCache* cache) {
  if (units.empty()) throw std::invalid_argument("search_bounded: empty unit set");
  SearchStats local_stats;
  SearchStats& out = stats != nullptr ? *stats : local_stats;
  std::optional<SubtreeCache> local_cache;
  if (options.use_cache && cache == nullptr) {
    local_cache.emplace(options.cache_capacity);
    cache = &*local_cache;
  }
  auto start = std::chrono::steady_clock::now();
  Searcher searcher(dataset, depth, options, out, cache);
  Solution result = searcher.run(units, depth);
  out.elapsed_seconds +=
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

Solution train(const Dataset& dataset, std::size_t depth, const SearchOptions& options,
               SearchStats* stats) {
  std::vector<UnitIndex> units = all_units(dataset);
  return search_bounded(dataset, units, depth, options, stats);
}

}  // namespace policy_tree
