// Copyright 2026 The plenhance Authors.
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

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "plenhance/types.hpp"

namespace plenhance {

struct PropagationParams {
  double beta = 2.0;
  SingleSeedPolicy single_seed_policy = SingleSeedPolicy::kSkip;
  double fixed_radius = 0.0;

  static PropagationParams from_config(const EnhancementConfig& config) {
    return {config.beta, config.single_seed_policy, config.fixed_radius};
  }
};

/// Outcome of propagating one mask label.
///
/// `rounds` counts exploration-set evaluations, including the final one that
/// comes back empty. A propagation that labels nothing reports 0 rounds.
struct PropagationResult {
  IndexSet newly_labeled;
  std::size_t rounds = 0;
  std::optional<double> final_d_exp;
};

/// Per-round record of a GAPP run, for inspection and testing.
struct PropagationRound {
  std::optional<double> d_exp;  // nullopt while the seed set is a singleton
  double radius = 0.0;          // beta * d_exp, or the fixed radius
  IndexSet labeled;             // B_exp of this round, ascending
};

struct PropagationTrace {
  IndexSet initial_seeds;
  IndexSet initial_unlabeled;
  std::vector<PropagationRound> rounds;
};

/// Direct propagation: every unlabeled point takes `label` in one round.
PropagationResult direct_propagate(std::span<const PointIndex> seeds,
                                   std::span<const PointIndex> unlabeled,
                                   ClassId label, std::span<ClassId> labels);

/// d_i: min over k in `set`, k != i, of |o_i - o_k|. Throws EmptySet when
/// `set` holds nothing but i.
double min_dist_to_set(PointIndex i, std::span<const PointIndex> set,
                       const PointCloud& cloud);

/// d_exp: max over seeds of their distance to the nearest other seed;
/// nullopt for a single seed. Linear scans.
std::optional<double> exploration_distance(std::span<const PointIndex> seeds,
                                           const PointCloud& cloud);

/// B_exp: unlabeled points within beta * d_exp (inclusive) of the seed set.
/// Linear scans.
IndexSet expansion_set(std::span<const PointIndex> unlabeled,
                       std::span<const PointIndex> seeds, double d_exp,
                       double beta, const PointCloud& cloud);

/// Geometry-aware progressive propagation, accelerated with SpatialIndex.
/// Grows the seed set round by round with every unlabeled point within
/// beta * d_exp of it, recomputing d_exp over the grown set, until a round
/// adds nothing. Writes `label` into `labels` for every newly labeled point.
///
/// Requires seeds and unlabeled to be sorted and disjoint.
PropagationResult gapp_propagate(const PointCloud& cloud,
                                 std::span<const PointIndex> seeds,
                                 std::span<const PointIndex> unlabeled,
                                 ClassId label, const PropagationParams& params,
                                 std::span<ClassId> labels,
                                 PropagationTrace* trace = nullptr);

/// Same contract as gapp_propagate, computed with O(n^2) nested loops over
/// the equations. Used as the reference implementation in tests.
PropagationResult gapp_propagate_bruteforce(
    const PointCloud& cloud, std::span<const PointIndex> seeds,
    std::span<const PointIndex> unlabeled, ClassId label,
    const PropagationParams& params, std::span<ClassId> labels,
    PropagationTrace* trace = nullptr);

}  // namespace plenhance
