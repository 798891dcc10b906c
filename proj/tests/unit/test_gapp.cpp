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

#include <doctest.h>

#include <algorithm>
#include <limits>
#include <numeric>
#include <random>
#include <set>

#include "plenhance/error.hpp"
#include "plenhance/gapp.hpp"
#include "test_support.hpp"

using namespace plenhance;

namespace {

constexpr ClassId kCar = 1;

// Reference propagation written directly from the definitions with sets.
// Returns the labeled points and the number of expansion-set evaluations.
std::pair<std::set<PointIndex>, std::size_t> reference_gapp(
    const PointCloud& cloud, std::set<PointIndex> seeds,
    std::set<PointIndex> unlabeled, double beta) {
  std::set<PointIndex> labeled;
  std::size_t evaluations = 0;
  while (seeds.size() >= 2) {
    double d_exp = 0.0;
    for (PointIndex i : seeds) {
      double nearest = std::numeric_limits<double>::infinity();
      for (PointIndex k : seeds) {
        if (k != i) nearest = std::min(nearest, distance(cloud[i], cloud[k]));
      }
      d_exp = std::max(d_exp, nearest);
    }
    std::set<PointIndex> grow;
    for (PointIndex i : unlabeled) {
      for (PointIndex k : seeds) {
        if (distance(cloud[i], cloud[k]) <= beta * d_exp) {
          grow.insert(i);
          break;
        }
      }
    }
    ++evaluations;
    if (grow.empty()) break;
    for (PointIndex i : grow) {
      unlabeled.erase(i);
      seeds.insert(i);
      labeled.insert(i);
    }
  }
  return {labeled, labeled.empty() ? 0 : evaluations};
}

struct Instance {
  PointCloud cloud;
  IndexSet seeds;
  IndexSet unlabeled;
  double beta = 2.0;
};

Instance random_instance(std::mt19937_64& rng, std::size_t max_points) {
  std::uniform_int_distribution<std::size_t> n_dist(2, max_points);
  const std::size_t n = n_dist(rng);
  std::uniform_int_distribution<std::size_t> clusters(1, 6);
  Instance inst;
  inst.cloud = testing::clustered_cloud(rng, n, clusters(rng));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double seed_rate = 0.05 + 0.4 * unit(rng);
  for (PointIndex i = 0; i < n; ++i) {
    (unit(rng) < seed_rate ? inst.seeds : inst.unlabeled).push_back(i);
  }
  if (inst.seeds.empty()) {
    inst.seeds.push_back(inst.unlabeled.back());
    inst.unlabeled.pop_back();
  }
  inst.beta = 0.5 + 3.0 * unit(rng);
  return inst;
}

PropagationResult run(const Instance& inst, bool indexed,
                      PropagationTrace* trace = nullptr) {
  std::vector<ClassId> labels(inst.cloud.size(), kIgnore);
  for (PointIndex s : inst.seeds) labels[s] = kCar;
  PropagationParams params;
  params.beta = inst.beta;
  return indexed ? gapp_propagate(inst.cloud, inst.seeds, inst.unlabeled, kCar,
                                  params, labels, trace)
                 : gapp_propagate_bruteforce(inst.cloud, inst.seeds,
                                             inst.unlabeled, kCar, params,
                                             labels, trace);
}

}  // namespace

TEST_CASE("direct propagation labels everything") {
  std::vector<ClassId> labels(8, kIgnore);
  const IndexSet seeds{0};
  const IndexSet unlabeled{3, 7};
  const auto r = direct_propagate(seeds, unlabeled, kCar, labels);
  CHECK(r.newly_labeled == unlabeled);
  CHECK(labels[3] == kCar);
  CHECK(labels[7] == kCar);
  CHECK(labels[1] == kIgnore);

  const auto none = direct_propagate(seeds, {}, kCar, labels);
  CHECK(none.newly_labeled.empty());
}

TEST_CASE("min_dist_to_set") {
  const PointCloud cloud({{0, 0, 0}, {1, 0, 0}, {3, 0, 0}, {0, 0, 0}});
  const IndexSet s{1, 2};
  CHECK(min_dist_to_set(0, s, cloud) == 1.0);
  const IndexSet self{0};
  CHECK_THROWS_AS(min_dist_to_set(0, self, cloud), Error);
  const IndexSet twin{0, 3};
  CHECK(min_dist_to_set(0, twin, cloud) == 0.0);
}

TEST_CASE("exploration distance") {
  const PointCloud cloud = testing::line_cloud({0.0F, 1.0F, 2.5F});
  const IndexSet two{0, 1};
  const IndexSet three{0, 1, 2};
  const IndexSet one{2};
  CHECK(exploration_distance(two, cloud) == 1.0);
  CHECK(exploration_distance(three, cloud) == 1.5);
  CHECK_FALSE(exploration_distance(one, cloud));
}

TEST_CASE("expansion set") {
  const PointCloud cloud = testing::line_cloud({0.0F, 1.0F, 2.5F, 10.0F, 3.0F});
  const IndexSet seeds{0, 1};
  const IndexSet unlabeled{2, 3};
  CHECK(expansion_set(unlabeled, seeds, 1.0, 2.0, cloud) == IndexSet{2});
  CHECK(expansion_set({}, seeds, 1.0, 2.0, cloud).empty());
  // Point 4 sits at exactly beta * d_exp = 2 from seed 1.
  const IndexSet edge{4};
  CHECK(expansion_set(edge, seeds, 1.0, 2.0, cloud) == IndexSet{4});
}

TEST_CASE("hand-worked 1-D trace") {
  const PointCloud cloud = testing::line_cloud({0.0F, 1.0F, 2.5F, 10.0F});
  Instance inst{cloud, {0, 1}, {2, 3}, 2.0};
  for (bool indexed : {true, false}) {
    PropagationTrace trace;
    const auto r = run(inst, indexed, &trace);
    CHECK(r.newly_labeled == IndexSet{2});
    CHECK(r.rounds == 2);
    REQUIRE(trace.rounds.size() == 2);
    CHECK(trace.rounds[0].d_exp == 1.0);
    CHECK(trace.rounds[0].radius == 2.0);
    CHECK(trace.rounds[0].labeled == IndexSet{2});
    CHECK(trace.rounds[1].d_exp == 1.5);
    CHECK(trace.rounds[1].radius == 3.0);
    CHECK(trace.rounds[1].labeled.empty());
  }
}

TEST_CASE("labels are written only for newly labeled points") {
  const PointCloud cloud = testing::line_cloud({0.0F, 1.0F, 2.5F, 10.0F});
  std::vector<ClassId> labels{kCar, kCar, kIgnore, kIgnore};
  const IndexSet seeds{0, 1};
  const IndexSet unlabeled{2, 3};
  gapp_propagate(cloud, seeds, unlabeled, kCar, {}, labels);
  CHECK(labels == std::vector<ClassId>{kCar, kCar, kCar, kIgnore});
}

TEST_CASE("empty unlabeled set") {
  const PointCloud cloud = testing::line_cloud({0.0F, 1.0F});
  Instance inst{cloud, {0, 1}, {}, 2.0};
  for (bool indexed : {true, false}) {
    const auto r = run(inst, indexed);
    CHECK(r.newly_labeled.empty());
    CHECK(r.rounds == 0);
  }
}

TEST_CASE("single seed policies") {
  const PointCloud cloud = testing::line_cloud({0.0F, 0.5F, 1.2F, 5.0F});
  const IndexSet seeds{0};
  const IndexSet unlabeled{1, 2, 3};
  for (bool indexed : {true, false}) {
    std::vector<ClassId> labels{kCar, kIgnore, kIgnore, kIgnore};
    PropagationParams skip;
    const auto r = indexed
                       ? gapp_propagate(cloud, seeds, unlabeled, kCar, skip, labels)
                       : gapp_propagate_bruteforce(cloud, seeds, unlabeled, kCar,
                                                   skip, labels);
    CHECK(r.newly_labeled.empty());
    CHECK(r.rounds == 0);
    CHECK(labels[1] == kIgnore);

    // Fixed radius 0.5 picks up point 1, then d_exp = 0.5 and the radius
    // 1.0 picks up point 2 (0.7 away); point 3 stays out.
    PropagationParams fixed;
    fixed.single_seed_policy = SingleSeedPolicy::kFixedRadius;
    fixed.fixed_radius = 0.5;
    const auto f = indexed
                       ? gapp_propagate(cloud, seeds, unlabeled, kCar, fixed, labels)
                       : gapp_propagate_bruteforce(cloud, seeds, unlabeled, kCar,
                                                   fixed, labels);
    CHECK(f.newly_labeled == IndexSet{1, 2});
    CHECK(f.rounds == 3);
  }
}

TEST_CASE("indexed and brute-force propagation agree with a reference") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 150; ++trial) {
    const Instance inst = random_instance(rng, 400);
    PropagationTrace trace;
    const auto fast = run(inst, true, &trace);
    const auto slow = run(inst, false);
    CHECK(fast.newly_labeled == slow.newly_labeled);
    CHECK(fast.rounds == slow.rounds);

    const auto [want, evaluations] = reference_gapp(
        inst.cloud, {inst.seeds.begin(), inst.seeds.end()},
        {inst.unlabeled.begin(), inst.unlabeled.end()}, inst.beta);
    CHECK(fast.newly_labeled == IndexSet(want.begin(), want.end()));
    CHECK(fast.rounds == evaluations);

    // Seed set grows strictly until the final empty round.
    for (std::size_t r = 0; r + 1 < trace.rounds.size(); ++r) {
      CHECK_FALSE(trace.rounds[r].labeled.empty());
    }
    if (!fast.newly_labeled.empty()) {
      CHECK(trace.rounds.back().labeled.empty());
      CHECK(fast.rounds - 1 <= inst.unlabeled.size());
    }
  }
}

TEST_CASE("propagation never exceeds direct propagation") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 60; ++trial) {
    const Instance inst = random_instance(rng, 300);
    const auto g = run(inst, true);
    std::vector<ClassId> labels(inst.cloud.size(), kIgnore);
    const auto d = direct_propagate(inst.seeds, inst.unlabeled, kCar, labels);
    CHECK(std::includes(d.newly_labeled.begin(), d.newly_labeled.end(),
                        g.newly_labeled.begin(), g.newly_labeled.end()));
  }
}

TEST_CASE("scale equivariance") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 40; ++trial) {
    const Instance inst = random_instance(rng, 250);
    // Power-of-two factors keep float coordinates exact.
    for (float s : {0.25F, 2.0F, 8.0F}) {
      std::vector<Point3f> scaled;
      for (const auto& p : inst.cloud.points()) scaled.push_back({p.x * s, p.y * s, p.z * s});
      Instance other = inst;
      other.cloud = PointCloud(scaled);
      CHECK(run(other, true).newly_labeled == run(inst, true).newly_labeled);
    }
  }
}

TEST_CASE("permutation invariance") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 40; ++trial) {
    const Instance inst = random_instance(rng, 250);
    const std::size_t n = inst.cloud.size();
    std::vector<PointIndex> perm(n);  // new position -> old index
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<PointIndex> where(n);
    for (PointIndex k = 0; k < n; ++k) where[perm[k]] = k;

    std::vector<Point3f> pts(n);
    for (PointIndex k = 0; k < n; ++k) pts[k] = inst.cloud[perm[k]];
    Instance other{PointCloud(pts), {}, {}, inst.beta};
    for (PointIndex s : inst.seeds) other.seeds.push_back(where[s]);
    for (PointIndex u : inst.unlabeled) other.unlabeled.push_back(where[u]);
    std::sort(other.seeds.begin(), other.seeds.end());
    std::sort(other.unlabeled.begin(), other.unlabeled.end());

    IndexSet mapped;
    for (PointIndex k : run(other, true).newly_labeled) mapped.push_back(perm[k]);
    std::sort(mapped.begin(), mapped.end());
    CHECK(mapped == run(inst, true).newly_labeled);
  }
}
