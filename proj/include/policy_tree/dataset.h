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

#ifndef POLICY_TREE_DATASET_H_
#define POLICY_TREE_DATASET_H_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace policy_tree {

// All unit, covariate and action indices are 0-based, including in every
// serialized format. The R ecosystem this mirrors is 1-based; convert at the
// boundary.
using UnitIndex = std::uint32_t;

// Raised for malformed input data (shape mismatches, non-finite cells,
// unparsable files). The message names the offending location.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An exact reward amount: an integer number of grid ticks, where the grid
// spacing is a power of two chosen per dataset (see Dataset::reward_exponent).
// Sums of Reward values are exact, so any summation order gives the same bits
// and every search strategy computes identical rewards.
struct Reward {
  __int128 ticks = 0;

  friend constexpr Reward operator+(Reward a, Reward b) { return {a.ticks + b.ticks}; }
  friend constexpr Reward operator-(Reward a, Reward b) { return {a.ticks - b.ticks}; }
  constexpr Reward& operator+=(Reward o) {
    ticks += o.ticks;
    return *this;
  }
  constexpr Reward& operator-=(Reward o) {
    ticks -= o.ticks;
    return *this;
  }
  friend constexpr bool operator==(Reward, Reward) = default;
  friend constexpr auto operator<=>(Reward a, Reward b) { return a.ticks <=> b.ticks; }
};

// Immutable problem data: n units, p covariates, m actions.
//
// Built once by build_dataset() and shared read-only by every search. Besides
// the raw matrices it precomputes everything the searches need per unit or per
// covariate: exact fixed-point rewards, per-unit reward extrema, and
// per-covariate value ranks (dense, order preserving) used as sort keys.
class Dataset {
 public:
  std::size_t num_units() const { return num_units_; }
  std::size_t num_covariates() const { return num_covariates_; }
  std::size_t num_actions() const { return num_actions_; }

  double covariate(UnitIndex i, std::size_t j) const {
    return covariates_[static_cast<std::size_t>(i) * num_covariates_ + j];
  }
  std::span<const double> covariate_row(UnitIndex i) const {
    return {covariates_.data() + static_cast<std::size_t>(i) * num_covariates_, num_covariates_};
  }
  double reward(UnitIndex i, std::size_t a) const {
    return rewards_[static_cast<std::size_t>(i) * num_actions_ + a];
  }
  std::span<const double> reward_row(UnitIndex i) const {
    return {rewards_.data() + static_cast<std::size_t>(i) * num_actions_, num_actions_};
  }

  // Exact reward of unit i under action a.
  Reward exact_reward(UnitIndex i, std::size_t a) const {
    return exact_rewards_[static_cast<std::size_t>(i) * num_actions_ + a];
  }
  std::span<const Reward> exact_reward_row(UnitIndex i) const {
    return {exact_rewards_.data() + static_cast<std::size_t>(i) * num_actions_, num_actions_};
  }

  Reward unit_max_reward(UnitIndex i) const { return unit_max_[i]; }
  Reward unit_min_reward(UnitIndex i) const { return unit_min_[i]; }
  std::size_t distinct_count(std::size_t j) const { return distinct_counts_[j]; }

  // Dense rank of x[i][j] among the distinct values of covariate j:
  // rank(i, j) < rank(k, j) iff x[i][j] < x[k][j].
  std::uint32_t value_rank(UnitIndex i, std::size_t j) const {
    return ranks_[j * num_units_ + i];
  }
  // The distinct values of covariate j in ascending order; indexed by rank.
  std::span<const double> distinct_values(std::size_t j) const { return distinct_values_[j]; }

  // Grid exponent q: a Reward of t ticks is worth t * 2^q.
  int reward_exponent() const { return reward_exponent_; }
  // True when some input reward was not representable on the grid and was
  // rounded to the nearest grid point (only for extreme dynamic ranges).
  bool rewards_rounded() const { return rewards_rounded_; }

  double to_real(Reward r) const;
  // Converts a real to the grid. Throws DataError when `value` is not exactly
  // representable on this dataset's grid.
  Reward from_real(double value) const;

 private:
  friend Dataset build_dataset(std::span<const double>, std::size_t, std::span<const double>,
                               std::size_t);

  std::size_t num_units_ = 0;
  std::size_t num_covariates_ = 0;
  std::size_t num_actions_ = 0;
  std::vector<double> covariates_;  // row-major n x p
  std::vector<double> rewards_;     // row-major n x m
  std::vector<Reward> exact_rewards_;
  std::vector<Reward> unit_max_;
  std::vector<Reward> unit_min_;
  std::vector<std::size_t> distinct_counts_;
  std::vector<std::uint32_t> ranks_;  // column-major p x n
  std::vector<std::vector<double>> distinct_values_;
  int reward_exponent_ = 0;
  bool rewards_rounded_ = false;
};

// Builds a Dataset from row-major matrices: `covariates` is n x p, `rewards`
// is n x m. Requires n >= 1, p >= 1, m >= 2 and finite entries; throws
// DataError naming the offending row/column otherwise.
Dataset build_dataset(std::span<const double> covariates, std::size_t num_covariates,
                      std::span<const double> rewards, std::size_t num_actions);

// Convenience overload taking nested rows.
Dataset build_dataset(const std::vector<std::vector<double>>& covariates,
                      const std::vector<std::vector<double>>& rewards);

}  // namespace policy_tree

#endif  // POLICY_TREE_DATASET_H_
