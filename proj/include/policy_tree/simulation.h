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

#ifndef POLICY_TREE_SIMULATION_H_
#define POLICY_TREE_SIMULATION_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "policy_tree/dataset.h"
#include "policy_tree/tree.h"

namespace policy_tree {

enum class CovariateKind { kContinuous, kDiscrete };

// Synthetic benchmark design: randomized treatment over m arms and outcome
//   Y = X1 + X2 * 1{W = first arm} + X3 * 1{W = last arm} + eps,
// eps ~ Uniform(-noise_half_width, noise_half_width).
struct SimConfig {
  std::size_t n = 1000;
  std::size_t p = 10;  // >= 3
  CovariateKind kind = CovariateKind::kContinuous;
  std::size_t m = 2;  // >= 2
  std::size_t depth = 2;
  double noise_half_width = 1.0;
  std::uint64_t seed = 1;
};

struct SimDataset {
  std::size_t n = 0;
  std::size_t p = 0;
  std::size_t m = 0;
  std::vector<double> x;           // n x p, row-major
  std::vector<std::uint32_t> w;    // 0-based arm; label 1 is arm 0
  std::vector<double> y;
  std::vector<double> mu;          // n x m, true E[Y | X, W = w]
  std::vector<double> scores;      // n x m doubly-robust rewards

  std::span<const double> x_row(std::size_t i) const { return {x.data() + i * p, p}; }
};

// Externally estimated nuisances (e.g. from a fitted forest), n x m each.
struct Nuisances {
  std::vector<double> mu;
  std::vector<double> propensity;
};

// Portable random source: mt19937_64 with explicit transforms, so a seed
// produces the same draws on every standard library.
class SimRng {
 public:
  explicit SimRng(std::uint64_t seed) : engine_(seed) {}
  double uniform();                        // [0, 1), 53 random bits
  double uniform(double lo, double hi);    // [lo, hi)
  double normal();                         // Marsaglia polar method
  std::uint32_t below(std::uint32_t bound);  // uniform on [0, bound)

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_normal_;
};

// Mixes a base seed with a repetition index (splitmix64).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

// Draws X, W, Y per the design and fills mu and scores (oracle nuisances).
// Per unit, draws are taken in the order X row, W, eps. Throws
// std::invalid_argument for p < 3, m < 2 or n == 0.
SimDataset generate(const SimConfig& config);

// Doubly-robust scores Gamma[i][w] = mu_w(X_i) + (Y_i - mu_w(X_i)) / e_w *
// 1{W_i = w}, with the true mu and e_w = 1/m, or the supplied nuisances.
std::vector<double> oracle_scores(const SimDataset& sim);
std::vector<double> oracle_scores(const SimDataset& sim, const Nuisances& nuisances);

// The learning problem (X, scores).
Dataset to_dataset(const SimDataset& sim);

// Mean score of the tree's assigned actions: (1/n) sum_i Gamma[i][pi(X_i)].
double policy_value(const PolicyTree& tree, const SimDataset& sim);

// sqrt(mean((a - b)^2)). Throws std::invalid_argument on empty or
// mismatched inputs.
double rmse(std::span<const double> a, std::span<const double> b);

}  // namespace policy_tree

#endif  // POLICY_TREE_SIMULATION_H_
