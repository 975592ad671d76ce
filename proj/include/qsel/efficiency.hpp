// Copyright 2026 The qsel Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Cluster-growth bookkeeping: block doubling with a fixed per-combination
// success probability versus all-or-nothing post-selection. A state of size
// N needs ceil(log2 N) consecutive successes along one lineage, so the joint
// probability is polynomially small in N, against the 2^-N of post-selected
// schemes. Costs are counted in verified pairs; a failed combination
// destroys both input blocks.

#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <random>

#include "qsel/common.hpp"

namespace qsel {

struct GrowthModel {
  double p = 0.5;          // per-combination success probability
  double pair_cost = 1.0;  // cost of one verified pair

  void check() const {
    if (!(p > 0.0) || p > 1.0)
      throw ArgumentError("growth model needs 0 < p <= 1");
    if (!(pair_cost > 0.0))
      throw ArgumentError("growth model needs pair_cost > 0");
  }
};

namespace detail {

inline int ceil_log2(std::uint64_t n) {
  int k = 0;
  std::uint64_t v = 1;
  while (v < n) {
    v <<= 1;
    ++k;
  }
  return k;
}

inline bool is_power_of_two(std::uint64_t n) { return n && !(n & (n - 1)); }

}  // namespace detail

// Probability that every combination along one lineage succeeds, reaching
// size >= N. base_size selects the counting convention: 1 counts all
// ceil(log2 N) doublings from single qubits (so P(N, 1/2) = 1/N exactly);
// 2 starts from verified pairs, which is one factor of p cheaper.
inline double joint_success_probability(std::uint64_t n_target,
                                        const GrowthModel &model,
                                        int base_size = 1) {
  model.check();
  if (n_target < 2) throw ArgumentError("target size must be at least 2");
  if (base_size != 1 && base_size != 2)
    throw ArgumentError("base_size must be 1 or 2");
  int steps = detail::ceil_log2(n_target);
  if (base_size == 2) steps = std::max(steps - 1, 0);
  double prob = 1.0;
  for (int k = 0; k < steps; ++k) prob *= model.p;
  return prob;
}

// All-or-nothing post-selection over N qubits.
inline double postselection_probability(std::uint64_t n_target) {
  if (n_target < 1) throw ArgumentError("target size must be at least 1");
  return std::ldexp(1.0, -static_cast<int>(n_target));
}

// Expected number of verified pairs consumed to grow a block of N qubits,
// with failed combinations destroying both inputs: E_1 = pair_cost and
// E_k = (2/p) E_{k-1}, so E = pair_cost * (2/p)^(log2 N - 1).
inline double expected_pair_cost(std::uint64_t n_target,
                                 const GrowthModel &model) {
  model.check();
  if (n_target < 2 || !detail::is_power_of_two(n_target))
    throw ArgumentError("analytic pair cost needs N a power of two >= 2");
  const int steps = detail::ceil_log2(n_target) - 1;
  double cost = model.pair_cost;
  for (int k = 0; k < steps; ++k) cost *= 2.0 / model.p;
  return cost;
}

struct GrowthStats {
  int trials = 0;
  double mean = 0.0;
  double stddev = 0.0;
  std::map<long long, long long> histogram;  // pair count -> occurrences
};

// Simulates the doubling process: a block of size 2^k retries combining two
// freshly grown sub-blocks until a combination succeeds. Deterministic per
// seed, with one generator stream per trial.
inline GrowthStats monte_carlo_growth(std::uint64_t n_target,
                                      const GrowthModel &model, int trials,
                                      std::uint64_t seed = kDefaultSeed) {
  model.check();
  if (trials < 1) throw ArgumentError("trials must be positive");
  if (n_target < 2 || !detail::is_power_of_two(n_target))
    throw ArgumentError("growth simulation needs N a power of two >= 2");
  const int levels = detail::ceil_log2(n_target) - 1;

  GrowthStats stats;
  stats.trials = trials;
  double sum = 0.0, sum_sq = 0.0;
  for (int t = 0; t < trials; ++t) {
    auto rng = stream_rng(seed, static_cast<std::uint64_t>(t));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    // cost(0) = one pair; cost(k) = sum of fresh sub-block costs until one
    // combination succeeds.
    auto cost = [&](auto &&self, int level) -> double {
      if (level == 0) return model.pair_cost;
      double spent = 0.0;
      for (;;) {
        spent += self(self, level - 1);
        spent += self(self, level - 1);
        if (unit(rng) < model.p) return spent;
      }
    };
    const double c = cost(cost, levels);
    sum += c;
    sum_sq += c * c;
    ++stats.histogram[static_cast<long long>(c)];
  }
  stats.mean = sum / trials;
  const double var = sum_sq / trials - stats.mean * stats.mean;
  stats.stddev = var > 0.0 ? std::sqrt(var) : 0.0;
  return stats;
}

}  // namespace qsel
