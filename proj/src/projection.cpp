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

#include "plenhance/projection.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "plenhance/error.hpp"

namespace plenhance {

std::size_t PixelProjection::count_valid() const {
  return static_cast<std::size_t>(std::count_if(
      entries_.begin(), entries_.end(),
      [](const std::optional<Pixel>& e) { return e.has_value(); }));
}

std::optional<Pixel> project_point(const Point3f& point,
                                   const CameraModel& camera) {
  const auto& p = camera.projection();
  const double x = point.x;
  const double y = point.y;
  const double z = point.z;
  const double a = p[0] * x + p[1] * y + p[2] * z + p[3];
  const double b = p[4] * x + p[5] * y + p[6] * z + p[7];
  const double d = p[8] * x + p[9] * y + p[10] * z + p[11];
  if (!(d > 0.0)) return std::nullopt;

  const double u = std::floor(a / d);
  const double v = std::floor(b / d);
  // Also rejects NaN from overflowing products.
  if (!(u >= 0.0 && u < static_cast<double>(camera.image_width()))) {
    return std::nullopt;
  }
  if (!(v >= 0.0 && v < static_cast<double>(camera.image_height()))) {
    return std::nullopt;
  }
  return Pixel{static_cast<std::uint32_t>(u), static_cast<std::uint32_t>(v)};
}

PixelProjection project_points(const PointCloud& cloud,
                               const CameraModel& camera) {
  std::vector<std::optional<Pixel>> entries;
  entries.reserve(cloud.size());
  for (const auto& pt : cloud.points()) {
    entries.push_back(project_point(pt, camera));
  }
  return PixelProjection(std::move(entries), camera.image_height(),
                         camera.image_width());
}

IndexSet points_in_mask(const PixelProjection& projection, const Mask& mask) {
  if (mask.height() != projection.image_height() ||
      mask.width() != projection.image_width()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "mask " + std::to_string(mask.id()) +
                    " does not match the projection image size");
  }
  IndexSet members;
  for (std::size_t k = 0; k < projection.size(); ++k) {
    const auto& px = projection[static_cast<PointIndex>(k)];
    if (px && mask.at(px->v, px->u)) {
      members.push_back(static_cast<PointIndex>(k));
    }
  }
  return members;
}

}  // namespace plenhance
