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

#include "policy_tree/simulation.h"

#include <cmath>
#include <stdexcept>

namespace policy_tree {

double SimRng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double SimRng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double SimRng::normal() {
  if (spare_normal_) {
    double v = *spare_normal_;
    spare_normal_.reset();
    return v;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double scale = std::sqrt(-2.0 * std::log(s) / s);
  spare_normal_ = v * scale;
  return u * scale;
}

std::uint32_t SimRng::below(std::uint32_t bound) {
  // Rejection keeps the draw exactly uniform.
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t r;
  do {
    r = engine_();
  } while (r >= limit);
  return static_cast<std::uint32_t>(r % bound);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ull * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

namespace {

double true_mu(std::span<const double> x, std::size_t w, std::size_t m) {
  return x[0] + (w == 0 ? x[1] : 0.0) + (w == m - 1 ? x[2] : 0.0);
}

}  // namespace

SimDataset generate(const SimConfig& config) {
  if (config.p < 3) throw std::invalid_argument("simulation needs p >= 3 covariates");
  if (config.m < 2) throw std::invalid_argument("simulation needs m >= 2 treatments");
  if (config.n == 0) throw std::invalid_argument("simulation needs n >= 1 units");
  SimRng rng(config.seed);
  SimDataset sim;
  sim.n = config.n;
  sim.p = config.p;
  sim.m = config.m;
  sim.x.resize(config.n * config.p);
  sim.w.resize(config.n);
  sim.y.resize(config.n);
  sim.mu.resize(config.n * config.m);
  for (std::size_t i = 0; i < config.n; ++i) {
    for (std::size_t j = 0; j < config.p; ++j) {
      sim.x[i * config.p + j] = config.kind == CovariateKind::kContinuous
                                    ? rng.normal()
                                    : (rng.uniform() < 0.5 ? 1.0 : 0.0);
    }
    sim.w[i] = rng.below(static_cast<std::uint32_t>(config.m));
    const double eps = rng.uniform(-config.noise_half_width, config.noise_half_width);
    auto x = sim.x_row(i);
    for (std::size_t w = 0; w < config.m; ++w) sim.mu[i * config.m + w] = true_mu(x, w, config.m);
    sim.y[i] = sim.mu[i * config.m + sim.w[i]] + eps;
  }
  sim.scores = oracle_scores(sim);
  return sim;
}

std::vector<double> oracle_scores(const SimDataset& sim) {
  Nuisances truth{sim.mu, std::vector<double>(sim.n * sim.m, 1.0 / static_cast<double>(sim.m))};
  return oracle_scores(sim, truth);
}

std::vector<double> oracle_scores(const SimDataset& sim, const Nuisances& nuisances) {
  if (nuisances.mu.size() != sim.n * sim.m || nuisances.propensity.size() != sim.n * sim.m) {
    throw std::invalid_argument("nuisance matrices must be n x m");
  }
  std::vector<double> scores(sim.n * sim.m);
  for (std::size_t i = 0; i < sim.n; ++i) {
    for (std::size_t w = 0; w < sim.m; ++w) {
      const std::size_t k = i * sim.m + w;
      double g = nuisances.mu[k];
      if (sim.w[i] == w) g += (sim.y[i] - nuisances.mu[k]) / nuisances.propensity[k];
      scores[k] = g;
    }
  }
  return scores;
}

Dataset to_dataset(const SimDataset& sim) {
  return build_dataset(sim.x, sim.p, sim.scores, sim.m);
}

double policy_value(const PolicyTree& tree, const SimDataset& sim) {
  Dataset ds = to_dataset(sim);
  return tree_reward(tree, ds, all_units(ds)) / static_cast<double>(sim.n);
}

double rmse(std::span<const double> a, std::span<const double> b) {
  if (a.empty()) throw std::invalid_argument("rmse: empty input");
  if (a.size() != b.size()) throw std::invalid_argument("rmse: length mismatch");
  double sum = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    sum += d * d;
  }
  return std::sqrt(sum / static_cast<double>(a.size()));
}

}  // namespace policy_tree
