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

#include <cmath>
#include <limits>

#include "plenhance/error.hpp"
#include "plenhance/types.hpp"
#include "test_support.hpp"

using namespace plenhance;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::kParse;
}

}  // namespace

TEST_CASE("point cloud rejects non-finite coordinates") {
  const float nan = std::numeric_limits<float>::quiet_NaN();
  const float inf = std::numeric_limits<float>::infinity();
  CHECK(code_of([&] { PointCloud({{0, 0, 0}, {nan, 0, 0}}); }) ==
        ErrorCode::kNonFinite);
  CHECK(code_of([&] { PointCloud({{0, inf, 0}}); }) == ErrorCode::kNonFinite);
  CHECK(PointCloud({{1, 2, 3}}).size() == 1);
}

TEST_CASE("label vector domain") {
  CHECK(LabelVector({0, -1, 4}, 5).count_labeled() == 2);
  CHECK(code_of([] { LabelVector({5}, 5); }) == ErrorCode::kBadLabel);
  CHECK(code_of([] { LabelVector({-2}, 5); }) == ErrorCode::kBadLabel);
}

TEST_CASE("mask area must match popcount") {
  CHECK(code_of([] { Mask(0, 2, 2, {0, 1, 1, 0}, 3); }) ==
        ErrorCode::kAreaMismatch);
  CHECK(code_of([] { Mask(0, 2, 2, {0, 1, 1}, 2); }) ==
        ErrorCode::kDimensionMismatch);
  const Mask m = Mask::from_bitmap(4, 2, 2, {0, 1, 1, 0});
  CHECK(m.area() == 2);
  CHECK(m.at(0, 1));
  CHECK_FALSE(m.at(1, 1));
}

TEST_CASE("mask set checks shape and ids") {
  const Mask a = Mask::from_bitmap(1, 2, 2, {1, 0, 0, 0});
  const Mask b = Mask::from_bitmap(1, 2, 2, {0, 1, 0, 0});
  const Mask c = Mask::from_bitmap(2, 3, 2, {0, 1, 0, 0, 0, 0});
  CHECK(code_of([&] { MaskSet({a, b}, 2, 2); }) == ErrorCode::kDuplicateId);
  CHECK(code_of([&] { MaskSet({a, c}, 2, 2); }) ==
        ErrorCode::kDimensionMismatch);
  CHECK(MaskSet({a}, 2, 2).size() == 1);
}

TEST_CASE("camera rejects non-finite entries") {
  std::array<double, 12> p{100, 0, 50, 0, 0, 100, 50, 0, 0, 0, 1, 0};
  p[5] = std::numeric_limits<double>::quiet_NaN();
  CHECK(code_of([&] { CameraModel(p, 100, 100); }) == ErrorCode::kNonFinite);
}

TEST_CASE("config validation") {
  EnhancementConfig c;
  CHECK_NOTHROW(c.validate());
  c.lambda_p = 1.5;
  CHECK(code_of([&] { c.validate(); }) == ErrorCode::kOutOfRange);
  c = {};
  c.beta = 0.0;
  CHECK(code_of([&] { c.validate(); }) == ErrorCode::kOutOfRange);
  c = {};
  c.lambda_s = -0.1;
  CHECK(code_of([&] { c.validate(); }) == ErrorCode::kOutOfRange);
}

TEST_CASE("validate_scene") {
  const PointCloud cloud({{0, 0, 1}, {1, 0, 1}, {0, 1, 1}});
  const auto camera = testing::simple_camera(4, 4);
  const MaskSet masks({testing::rect_mask(0, 4, 4, 0, 0, 2, 2)}, 4, 4);

  SUBCASE("consistent sizes") {
    const Scene s = validate_scene(cloud, LabelVector({0, -1, 1}, 5), masks, camera);
    CHECK(s.cloud().size() == 3);
  }
  SUBCASE("label length mismatch") {
    CHECK(code_of([&] {
            validate_scene(cloud, LabelVector({0, 1}, 5), masks, camera);
          }) == ErrorCode::kDimensionMismatch);
  }
  SUBCASE("out-of-range class") {
    CHECK(code_of([&] {
            validate_scene(cloud, LabelVector({0, 7, 1}, 5), masks, camera);
          }) == ErrorCode::kBadLabel);
  }
  SUBCASE("mask size differs from camera") {
    const MaskSet other({testing::rect_mask(0, 5, 4, 0, 0, 2, 2)}, 5, 4);
    CHECK(code_of([&] {
            validate_scene(cloud, LabelVector({0, 1, 1}, 5), other, camera);
          }) == ErrorCode::kDimensionMismatch);
  }
}

TEST_CASE("distance is symmetric to the bit") {
  std::mt19937_64 rng(3);
  const PointCloud c = testing::random_cloud(rng, 200);
  for (PointIndex i = 0; i + 1 < c.size(); ++i) {
    CHECK(distance(c[i], c[i + 1]) == distance(c[i + 1], c[i]));
    CHECK(squared_distance(c[i], c[i + 1]) == squared_distance(c[i + 1], c[i]));
  }
  CHECK(distance({0, 0, 0}, {3, 4, 0}) == 5.0);
}

TEST_CASE("error message carries the class name") {
  const Error e(ErrorCode::kRleSumMismatch, "runs sum to 3");
  CHECK(std::string(e.what()) == "RleSumMismatch: runs sum to 3");
  CHECK(e.detail() == "runs sum to 3");
}
