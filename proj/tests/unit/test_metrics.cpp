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

#include <numeric>
#include <random>

#include "plenhance/error.hpp"
#include "plenhance/metrics.hpp"

using namespace plenhance;

namespace {

constexpr ClassId kCar = 0;
constexpr ClassId kRoad = 1;

LabelStats stats_with_correct(std::size_t correct) {
  std::vector<ClassId> v(correct, kCar);
  return compute_stats(LabelVector(v, 2), LabelVector(v, 2));
}

}  // namespace

TEST_CASE("worked example") {
  const LabelVector pred({kCar, kCar, kRoad, kIgnore}, 2);
  const LabelVector gt({kCar, kRoad, kRoad, kCar}, 2);
  const LabelStats s = compute_stats(pred, gt);
  CHECK(s.accuracy(kCar) == 0.5);
  CHECK(s.accuracy(kRoad) == 1.0);
  CHECK(s.avg_accuracy() == 0.75);
  CHECK(s.avg_defined());
  CHECK(s.total_correct() == 2);
  CHECK(s.total_predicted() == 3);
  CHECK(s.coverage() == 0.75);
}

TEST_CASE("perfect and empty predictions") {
  const LabelVector gt({kCar, kRoad, kRoad}, 2);
  const LabelStats perfect = compute_stats(gt, gt);
  CHECK(perfect.accuracy(kCar) == 1.0);
  CHECK(perfect.accuracy(kRoad) == 1.0);
  CHECK(perfect.avg_accuracy() == 1.0);

  const LabelStats none = compute_stats(LabelVector({kIgnore, kIgnore, kIgnore}, 2), gt);
  CHECK(none.total_correct() == 0);
  CHECK(none.coverage() == 0.0);
  CHECK(none.avg_accuracy() == 0.0);
  CHECK_FALSE(none.avg_defined());
  CHECK_FALSE(none.accuracy(kCar));
}

TEST_CASE("ground-truth ignore points are not evaluated") {
  const LabelVector pred({kCar, kCar, kIgnore}, 2);
  const LabelVector gt({kCar, kIgnore, kIgnore}, 2);
  const LabelStats s = compute_stats(pred, gt);
  CHECK(s.evaluated_points() == 1);
  CHECK(s.predicted(kCar) == 1);
  CHECK(s.coverage() == 1.0);
}

TEST_CASE("length mismatch") {
  CHECK_THROWS_AS(compute_stats(LabelVector({0}, 2), LabelVector({0, 1}, 2)), Error);
}

TEST_CASE("increment") {
  CHECK(compute_increment(stats_with_correct(4), stats_with_correct(9)) == 125.0);
  CHECK(compute_increment(stats_with_correct(4), stats_with_correct(4)) == 0.0);
  CHECK_THROWS_AS(compute_increment(stats_with_correct(0), stats_with_correct(3)), Error);
  CHECK(format_increment(38.18) == "+38.18%");
  CHECK(format_increment(125.0) == "+125.00%");
  CHECK(format_increment(-2.5) == "-2.50%");
}

TEST_CASE("merge equals pooled counting and permutation does not matter") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<ClassId> cls(-1, 3);
  std::vector<ClassId> pred(400), gt(400);
  for (auto& v : pred) v = cls(rng);
  for (auto& v : gt) v = cls(rng);
  const LabelStats all = compute_stats(LabelVector(pred, 4), LabelVector(gt, 4));

  LabelStats merged(4);
  merged.merge(compute_stats(LabelVector({pred.begin(), pred.begin() + 150}, 4),
                             LabelVector({gt.begin(), gt.begin() + 150}, 4)));
  merged.merge(compute_stats(LabelVector({pred.begin() + 150, pred.end()}, 4),
                             LabelVector({gt.begin() + 150, gt.end()}, 4)));
  CHECK(stats_to_json(merged) == stats_to_json(all));

  std::vector<std::size_t> perm(400);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<ClassId> p2(400), g2(400);
  for (std::size_t i = 0; i < 400; ++i) {
    p2[i] = pred[perm[i]];
    g2[i] = gt[perm[i]];
  }
  CHECK(stats_to_json(compute_stats(LabelVector(p2, 4), LabelVector(g2, 4))) ==
        stats_to_json(all));

  LabelStats other(3);
  CHECK_THROWS_AS(merged.merge(other), Error);
}

TEST_CASE("json report") {
  const LabelStats s = compute_stats(LabelVector({kCar, kCar, kRoad, kIgnore}, 2),
                                     LabelVector({kCar, kRoad, kRoad, kCar}, 2));
  const auto doc = stats_to_json(s);
  CHECK(doc.at("avg_accuracy").get<double>() == 0.75);
  CHECK(doc.at("coverage").get<double>() == 0.75);
  CHECK(doc.at("total_correct").get<std::uint64_t>() == 2);
}
