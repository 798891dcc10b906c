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

#include "plenhance/gapp.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "plenhance/error.hpp"
#include "plenhance/spatial_index.hpp"

namespace plenhance {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool skip_single_seed(std::size_t seed_count, const PropagationParams& params) {
  return seed_count == 1 &&
         params.single_seed_policy == SingleSeedPolicy::kSkip;
}

double round_radius(const std::optional<double>& d_exp,
                    const PropagationParams& params) {
  return d_exp ? params.beta * *d_exp : params.fixed_radius;
}

IndexSet within_radius(std::span<const PointIndex> unlabeled,
                       std::span<const PointIndex> seeds, double radius,
                       const PointCloud& cloud) {
  IndexSet out;
  for (PointIndex k : unlabeled) {
    double best = kInf;
    for (PointIndex s : seeds) {
      if (s == k) continue;
      best = std::min(best, distance(cloud[k], cloud[s]));
    }
    if (best <= radius) out.push_back(k);
  }
  return out;
}

void finish(PropagationResult& result, std::size_t evaluations,
            const std::optional<double>& last_d_exp) {
  std::sort(result.newly_labeled.begin(), result.newly_labeled.end());
  result.rounds = result.newly_labeled.empty() ? 0 : evaluations;
  result.final_d_exp = last_d_exp;
}

}  // namespace

PropagationResult direct_propagate(std::span<const PointIndex> /*seeds*/,
                                   std::span<const PointIndex> unlabeled,
                                   ClassId label, std::span<ClassId> labels) {
  PropagationResult result;
  result.newly_labeled.assign(unlabeled.begin(), unlabeled.end());
  for (PointIndex k : unlabeled) labels[k] = label;
  result.rounds = 1;
  return result;
}

double min_dist_to_set(PointIndex i, std::span<const PointIndex> set,
                       const PointCloud& cloud) {
  double best = kInf;
  bool any = false;
  for (PointIndex k : set) {
    if (k == i) continue;
    best = std::min(best, distance(cloud[i], cloud[k]));
    any = true;
  }
  if (!any) {
    throw Error(ErrorCode::kEmptySet,
                "no point other than " + std::to_string(i) + " in the set");
  }
  return best;
}

std::optional<double> exploration_distance(std::span<const PointIndex> seeds,
                                           const PointCloud& cloud) {
  if (seeds.size() < 2) return std::nullopt;
  double d_exp = 0.0;
  for (PointIndex i : seeds) {
    d_exp = std::max(d_exp, min_dist_to_set(i, seeds, cloud));
  }
  return d_exp;
}

IndexSet expansion_set(std::span<const PointIndex> unlabeled,
                       std::span<const PointIndex> seeds, double d_exp,
                       double beta, const PointCloud& cloud) {
  return within_radius(unlabeled, seeds, beta * d_exp, cloud);
}

PropagationResult gapp_propagate_bruteforce(
    const PointCloud& cloud, std::span<const PointIndex> seeds,
    std::span<const PointIndex> unlabeled, ClassId label,
    const PropagationParams& params, std::span<ClassId> labels,
    PropagationTrace* trace) {
  PropagationResult result;
  if (trace) {
    trace->initial_seeds.assign(seeds.begin(), seeds.end());
    trace->initial_unlabeled.assign(unlabeled.begin(), unlabeled.end());
  }
  if (seeds.empty() || unlabeled.empty() ||
      skip_single_seed(seeds.size(), params)) {
    return result;
  }

  IndexSet current(seeds.begin(), seeds.end());
  IndexSet remaining(unlabeled.begin(), unlabeled.end());
  std::size_t evaluations = 0;
  std::optional<double> d_exp;
  while (true) {
    d_exp = exploration_distance(current, cloud);
    const double radius = round_radius(d_exp, params);
    IndexSet batch = within_radius(remaining, current, radius, cloud);
    ++evaluations;
    if (trace) trace->rounds.push_back({d_exp, radius, batch});
    if (batch.empty()) break;

    for (PointIndex k : batch) labels[k] = label;
    result.newly_labeled.insert(result.newly_labeled.end(), batch.begin(),
                                batch.end());
    current.insert(current.end(), batch.begin(), batch.end());
    IndexSet rest;
    std::set_difference(remaining.begin(), remaining.end(), batch.begin(),
                        batch.end(), std::back_inserter(rest));
    remaining = std::move(rest);
  }
  finish(result, evaluations, d_exp);
  return result;
}

PropagationResult gapp_propagate(const PointCloud& cloud,
                                 std::span<const PointIndex> seeds,
                                 std::span<const PointIndex> unlabeled,
                                 ClassId label, const PropagationParams& params,
                                 std::span<ClassId> labels,
                                 PropagationTrace* trace) {
  PropagationResult result;
  if (trace) {
    trace->initial_seeds.assign(seeds.begin(), seeds.end());
    trace->initial_unlabeled.assign(unlabeled.begin(), unlabeled.end());
  }
  if (seeds.empty() || unlabeled.empty() ||
      skip_single_seed(seeds.size(), params)) {
    return result;
  }

  SpatialIndex index(cloud, seeds);

  // nearest-other-seed distance for every seed, parallel to seed_ids
  std::vector<PointIndex> seed_ids(seeds.begin(), seeds.end());
  std::vector<double> seed_nn(seed_ids.size(), kInf);
  for (std::size_t i = 0; i < seed_ids.size(); ++i) {
    if (auto nb = index.nearest(cloud[seed_ids[i]], seed_ids[i])) {
      seed_nn[i] = nb->distance;
    }
  }

  // distance to the seed set for every still-unlabeled point
  std::vector<PointIndex> remaining(unlabeled.begin(), unlabeled.end());
  std::vector<double> remaining_dist(remaining.size(), kInf);
  for (std::size_t j = 0; j < remaining.size(); ++j) {
    if (auto nb = index.nearest(cloud[remaining[j]], remaining[j])) {
      remaining_dist[j] = nb->distance;
    }
  }

  std::size_t evaluations = 0;
  std::optional<double> d_exp;
  while (true) {
    d_exp.reset();
    if (seed_ids.size() >= 2) {
      d_exp = *std::max_element(seed_nn.begin(), seed_nn.end());
    }
    const double radius = round_radius(d_exp, params);

    IndexSet batch;
    for (std::size_t j = 0; j < remaining.size(); ++j) {
      if (remaining_dist[j] <= radius) batch.push_back(remaining[j]);
    }
    ++evaluations;
    if (trace) trace->rounds.push_back({d_exp, radius, batch});
    if (batch.empty()) break;

    for (PointIndex k : batch) labels[k] = label;
    result.newly_labeled.insert(result.newly_labeled.end(), batch.begin(),
                                batch.end());

    // Old seeds may now have a closer neighbor in the batch.
    const KdTree batch_tree(cloud, batch);
    for (std::size_t i = 0; i < seed_ids.size(); ++i) {
      if (auto nb = batch_tree.nearest(cloud[seed_ids[i]])) {
        seed_nn[i] = std::min(seed_nn[i], nb->distance);
      }
    }
    index.insert(batch);
    for (PointIndex p : batch) {
      auto nb = index.nearest(cloud[p], p);
      seed_ids.push_back(p);
      seed_nn.push_back(nb ? nb->distance : kInf);
    }

    std::size_t w = 0;
    for (std::size_t j = 0; j < remaining.size(); ++j) {
      if (remaining_dist[j] <= radius) continue;  // moved into the batch
      double dist = remaining_dist[j];
      if (auto nb = batch_tree.nearest(cloud[remaining[j]])) {
        dist = std::min(dist, nb->distance);
      }
      remaining[w] = remaining[j];
      remaining_dist[w] = dist;
      ++w;
    }
    remaining.resize(w);
    remaining_dist.resize(w);
  }
  finish(result, evaluations, d_exp);
  return result;
}

}  // namespace plenhance
