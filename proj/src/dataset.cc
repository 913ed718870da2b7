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

#include "policy_tree/dataset.h"

#include <algorithm>
#include <bit>
#include <climits>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>

namespace policy_tree {
namespace {

// Bits kept free above the largest |reward| so that sums over all units and
// the transfer bound (anchor + spreads, at most ~4n max|r|) cannot overflow.
int headroom_bits(std::size_t n) {
  int log2n = 0;
  while ((std::size_t{1} << log2n) < n) ++log2n;
  return 124 - log2n;
}

void check_finite(double v, const char* what, std::size_t row, std::size_t col) {
  if (!std::isfinite(v)) {
    throw DataError(std::string("non-finite ") + what + " at row " + std::to_string(row) +
                    ", column " + std::to_string(col));
  }
}

__int128 to_ticks(double v, int exponent, bool* rounded) {
  double scaled = std::ldexp(v, -exponent);
  double whole = std::nearbyint(scaled);
  if (whole != scaled) *rounded = true;
  return static_cast<__int128>(whole);
}

}  // namespace

double Dataset::to_real(Reward r) const {
  return std::ldexp(static_cast<double>(r.ticks), reward_exponent_);
}

Reward Dataset::from_real(double value) const {
  if (!std::isfinite(value)) throw DataError("non-finite reward value");
  double scaled = std::ldexp(value, -reward_exponent_);
  if (scaled != std::trunc(scaled) || std::fabs(scaled) >= std::ldexp(1.0, 126)) {
    throw DataError("value " + std::to_string(value) + " is not on the dataset reward grid");
  }
  return {static_cast<__int128>(scaled)};
}

Dataset build_dataset(std::span<const double> covariates, std::size_t num_covariates,
                      std::span<const double> rewards, std::size_t num_actions) {
  if (num_covariates == 0) throw DataError("at least one covariate is required");
  if (num_actions < 2) throw DataError("at least two actions are required");
  if (covariates.size() % num_covariates != 0) {
    throw DataError("covariate matrix size is not a multiple of the covariate count");
  }
  if (rewards.size() % num_actions != 0) {
    throw DataError("reward matrix size is not a multiple of the action count");
  }
  const std::size_t n = covariates.size() / num_covariates;
  if (n == 0) throw DataError("dataset has no units");
  if (rewards.size() / num_actions != n) {
    throw DataError("covariates have " + std::to_string(n) + " rows but rewards have " +
                    std::to_string(rewards.size() / num_actions));
  }
  if (n > UINT32_MAX) throw DataError("too many units");

  Dataset ds;
  ds.num_units_ = n;
  ds.num_covariates_ = num_covariates;
  ds.num_actions_ = num_actions;
  ds.covariates_.assign(covariates.begin(), covariates.end());
  ds.rewards_.assign(rewards.begin(), rewards.end());

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < num_covariates; ++j) {
      check_finite(ds.covariates_[i * num_covariates + j], "covariate", i, j);
    }
    for (std::size_t a = 0; a < num_actions; ++a) {
      check_finite(ds.rewards_[i * num_actions + a], "reward", i, a);
    }
  }

  // Reward grid: the coarsest power of two dividing every reward, unless that
  // would leave too little headroom for exact sums.
  int lowest_bit = INT_MAX;
  int top_exponent = INT_MIN;
  for (double r : ds.rewards_) {
    if (r == 0.0) continue;
    int e = 0;
    double f = std::frexp(std::fabs(r), &e);  // |r| = f * 2^e, f in [0.5, 1)
    auto mantissa = static_cast<std::uint64_t>(std::ldexp(f, 53));
    lowest_bit = std::min(lowest_bit, e - 53 + std::countr_zero(mantissa));
    top_exponent = std::max(top_exponent, e);
  }
  if (lowest_bit == INT_MAX) {
    ds.reward_exponent_ = 0;
  } else {
    ds.reward_exponent_ = std::max(lowest_bit, top_exponent - headroom_bits(n));
  }
  ds.exact_rewards_.resize(ds.rewards_.size());
  for (std::size_t k = 0; k < ds.rewards_.size(); ++k) {
    ds.exact_rewards_[k].ticks = to_ticks(ds.rewards_[k], ds.reward_exponent_, &ds.rewards_rounded_);
  }

  ds.unit_max_.resize(n);
  ds.unit_min_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto row = ds.exact_reward_row(static_cast<UnitIndex>(i));
    auto [lo, hi] = std::minmax_element(row.begin(), row.end());
    ds.unit_min_[i] = *lo;
    ds.unit_max_[i] = *hi;
  }

  ds.distinct_counts_.resize(num_covariates);
  ds.distinct_values_.resize(num_covariates);
  ds.ranks_.resize(num_covariates * n);
  std::vector<UnitIndex> order(n);
  for (std::size_t j = 0; j < num_covariates; ++j) {
    std::iota(order.begin(), order.end(), UnitIndex{0});
    std::stable_sort(order.begin(), order.end(), [&](UnitIndex a, UnitIndex b) {
      return ds.covariate(a, j) < ds.covariate(b, j);
    });
    auto& values = ds.distinct_values_[j];
    std::uint32_t rank = 0;
    for (std::size_t k = 0; k < n; ++k) {
      double v = ds.covariate(order[k], j);
      if (k > 0 && v != values.back()) ++rank;
      if (k == 0 || v != values.back()) values.push_back(v);
      ds.ranks_[j * n + order[k]] = rank;
    }
    ds.distinct_counts_[j] = values.size();
  }
  return ds;
}

Dataset build_dataset(const std::vector<std::vector<double>>& covariates,
                      const std::vector<std::vector<double>>& rewards) {
  if (covariates.empty()) throw DataError("dataset has no units");
  if (rewards.size() != covariates.size()) {
    throw DataError("covariates have " + std::to_string(covariates.size()) +
                    " rows but rewards have " + std::to_string(rewards.size()));
  }
  const std::size_t p = covariates.front().size();
  const std::size_t m = rewards.front().size();
  std::vector<double> x;
  std::vector<double> r;
  x.reserve(covariates.size() * p);
  r.reserve(rewards.size() * m);
  for (std::size_t i = 0; i < covariates.size(); ++i) {
    if (covariates[i].size() != p) {
      throw DataError("covariate row " + std::to_string(i) + " has " +
                      std::to_string(covariates[i].size()) + " entries, expected " +
                      std::to_string(p));
    }
    if (rewards[i].size() != m) {
      throw DataError("reward row " + std::to_string(i) + " has " +
                      std::to_string(rewards[i].size()) + " entries, expected " +
                      std::to_string(m));
    }
    x.insert(x.end(), covariates[i].begin(), covariates[i].end());
    r.insert(r.end(), rewards[i].begin(), rewards[i].end());
  }
  return build_dataset(x, p, r, m);
}

}  // namespace policy_tree
