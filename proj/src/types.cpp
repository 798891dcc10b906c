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

#include "plenhance/types.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <unordered_set>
#include <utility>

#include "plenhance/error.hpp"

namespace plenhance {

double squared_distance(const Point3f& a, const Point3f& b) {
  const double dx = static_cast<double>(a.x) - static_cast<double>(b.x);
  const double dy = static_cast<double>(a.y) - static_cast<double>(b.y);
  const double dz = static_cast<double>(a.z) - static_cast<double>(b.z);
  return dx * dx + dy * dy + dz * dz;
}

double distance(const Point3f& a, const Point3f& b) {
  return std::sqrt(squared_distance(a, b));
}

namespace {

bool finite(const Point3f& p) {
  return std::isfinite(p.x) && std::isfinite(p.y) && std::isfinite(p.z);
}

void check_points(std::span<const Point3f> points) {
  if (points.size() > std::numeric_limits<PointIndex>::max()) {
    throw Error(ErrorCode::kOutOfRange,
                "point cloud exceeds " +
                    std::to_string(std::numeric_limits<PointIndex>::max()) +
                    " points");
  }
  for (std::size_t k = 0; k < points.size(); ++k) {
    if (!finite(points[k])) {
      throw Error(ErrorCode::kNonFinite,
                  "point " + std::to_string(k) + " has a non-finite coordinate");
    }
  }
}

void check_labels(std::span<const ClassId> labels, std::uint32_t num_classes) {
  for (std::size_t k = 0; k < labels.size(); ++k) {
    const ClassId c = labels[k];
    if (c == kIgnore) continue;
    if (c < 0 || static_cast<std::uint32_t>(c) >= num_classes) {
      throw Error(ErrorCode::kBadLabel,
                  "label " + std::to_string(c) + " at point " +
                      std::to_string(k) + " is outside [0, " +
                      std::to_string(num_classes) + ") and not IGNORE (-1)");
    }
  }
}

}  // namespace

PointCloud::PointCloud(std::vector<Point3f> points) : points_(std::move(points)) {
  check_points(points_);
}

LabelVector::LabelVector(std::vector<ClassId> labels, std::uint32_t num_classes)
    : labels_(std::move(labels)), num_classes_(num_classes) {
  check_labels(labels_, num_classes_);
}

std::size_t LabelVector::count_labeled() const {
  return static_cast<std::size_t>(
      std::count_if(labels_.begin(), labels_.end(),
                    [](ClassId c) { return c != kIgnore; }));
}

Mask::Mask(std::int64_t id, std::uint32_t height, std::uint32_t width,
           std::vector<std::uint8_t> bitmap, std::uint64_t area)
    : id_(id),
      height_(height),
      width_(width),
      bitmap_(std::move(bitmap)),
      area_(area) {
  if (bitmap_.size() != static_cast<std::size_t>(height_) * width_) {
    throw Error(ErrorCode::kDimensionMismatch,
                "mask " + std::to_string(id_) + " bitmap has " +
                    std::to_string(bitmap_.size()) + " pixels, expected " +
                    std::to_string(static_cast<std::size_t>(height_) * width_));
  }
  std::uint64_t popcount = 0;
  for (auto& px : bitmap_) {
    px = px != 0 ? 1 : 0;
    popcount += px;
  }
  if (popcount != area_) {
    throw Error(ErrorCode::kAreaMismatch,
                "mask " + std::to_string(id_) + " declares area " +
                    std::to_string(area_) + " but has " +
                    std::to_string(popcount) + " set pixels");
  }
}

Mask Mask::from_bitmap(std::int64_t id, std::uint32_t height,
                       std::uint32_t width, std::vector<std::uint8_t> bitmap) {
  const auto area = static_cast<std::uint64_t>(std::count_if(
      bitmap.begin(), bitmap.end(), [](std::uint8_t px) { return px != 0; }));
  return Mask(id, height, width, std::move(bitmap), area);
}

MaskSet::MaskSet(std::vector<Mask> masks, std::uint32_t image_height,
                 std::uint32_t image_width)
    : masks_(std::move(masks)),
      image_height_(image_height),
      image_width_(image_width) {
  std::unordered_set<std::int64_t> ids;
  for (const auto& m : masks_) {
    if (m.height() != image_height_ || m.width() != image_width_) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "mask " + std::to_string(m.id()) + " is " +
                      std::to_string(m.height()) + "x" +
                      std::to_string(m.width()) + ", image is " +
                      std::to_string(image_height_) + "x" +
                      std::to_string(image_width_));
    }
    if (!ids.insert(m.id()).second) {
      throw Error(ErrorCode::kDuplicateId,
                  "mask id " + std::to_string(m.id()) + " appears twice");
    }
  }
}

CameraModel::CameraModel(const std::array<double, 12>& projection,
                         std::uint32_t image_height, std::uint32_t image_width)
    : p_(projection), image_height_(image_height), image_width_(image_width) {
  for (std::size_t i = 0; i < p_.size(); ++i) {
    if (!std::isfinite(p_[i])) {
      throw Error(ErrorCode::kNonFinite,
                  "projection entry " + std::to_string(i) + " is not finite");
    }
  }
}

std::string_view to_string(MaskOrder order) {
  return order == MaskOrder::kAreaAscending ? "area_ascending"
                                            : "area_descending";
}

std::string_view to_string(SingleSeedPolicy policy) {
  return policy == SingleSeedPolicy::kSkip ? "skip" : "fixed_radius";
}

std::string_view to_string(PropagationMethod method) {
  return method == PropagationMethod::kGapp ? "gapp" : "dp";
}

void EnhancementConfig::validate() const {
  auto unit = [](double v, const char* name) {
    if (!(v > 0.0 && v <= 1.0)) {
      throw Error(ErrorCode::kOutOfRange,
                  std::string(name) + " = " + std::to_string(v) +
                      " is outside (0, 1]");
    }
  };
  unit(lambda_s, "lambda_s");
  unit(lambda_p, "lambda_p");
  unit(lambda_r, "lambda_r");
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw Error(ErrorCode::kOutOfRange,
                "beta = " + std::to_string(beta) + " must be positive");
  }
  if (single_seed_policy == SingleSeedPolicy::kFixedRadius &&
      (!(fixed_radius > 0.0) || !std::isfinite(fixed_radius))) {
    throw Error(ErrorCode::kOutOfRange,
                "fixed_radius = " + std::to_string(fixed_radius) +
                    " must be positive for the fixed_radius policy");
  }
}

Scene::Scene(PointCloud cloud, LabelVector labels, MaskSet masks,
             CameraModel camera)
    : cloud_(std::move(cloud)),
      labels_(std::move(labels)),
      masks_(std::move(masks)),
      camera_(std::move(camera)) {}

Scene validate_scene(PointCloud cloud, LabelVector labels, MaskSet masks,
                     CameraModel camera) {
  if (labels.size() != cloud.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "label vector has " + std::to_string(labels.size()) +
                    " entries for " + std::to_string(cloud.size()) + " points");
  }
  if (masks.image_height() != camera.image_height() ||
      masks.image_width() != camera.image_width()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "masks are " + std::to_string(masks.image_height()) + "x" +
                    std::to_string(masks.image_width()) + " but camera is " +
                    std::to_string(camera.image_height()) + "x" +
                    std::to_string(camera.image_width()));
  }
  // The value types enforce these on construction; re-checked so a bundle is
  // valid no matter how its parts were produced.
  check_points(cloud.points());
  check_labels(labels.values(), labels.num_classes());
  for (const auto& m : masks.masks()) {
    if (m.height() != camera.image_height() ||
        m.width() != camera.image_width()) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "mask " + std::to_string(m.id()) +
                      " does not match the camera image size");
    }
  }
  for (double v : camera.projection()) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::kNonFinite, "projection matrix is not finite");
    }
  }
  return Scene(std::move(cloud), std::move(labels), std::move(masks),
               std::move(camera));
}

}  // namespace plenhance
