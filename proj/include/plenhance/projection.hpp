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

#include <cstdint>
#include <optional>
#include <vector>

#include "plenhance/types.hpp"

namespace plenhance {

struct Pixel {
  std::uint32_t u = 0;  // column
  std::uint32_t v = 0;  // row

  friend bool operator==(const Pixel&, const Pixel&) = default;
};

/// One entry per point: the pixel it lands on, or nullopt when the point is
/// behind the camera (depth <= 0) or outside the image.
class PixelProjection {
 public:
  PixelProjection() = default;
  PixelProjection(std::vector<std::optional<Pixel>> entries,
                  std::uint32_t image_height, std::uint32_t image_width)
      : entries_(std::move(entries)),
        image_height_(image_height),
        image_width_(image_width) {}

  std::size_t size() const noexcept { return entries_.size(); }
  const std::optional<Pixel>& operator[](PointIndex k) const {
    return entries_[k];
  }
  std::uint32_t image_height() const noexcept { return image_height_; }
  std::uint32_t image_width() const noexcept { return image_width_; }
  std::size_t count_valid() const;

 private:
  std::vector<std::optional<Pixel>> entries_;
  std::uint32_t image_height_ = 0;
  std::uint32_t image_width_ = 0;
};

/// Projects a single point. Pixel binning is floor(a/d), floor(b/d); the
/// image border u == W or v == H is outside.
std::optional<Pixel> project_point(const Point3f& point,
                                   const CameraModel& camera);

PixelProjection project_points(const PointCloud& cloud,
                               const CameraModel& camera);

/// B_j: indices of validly projecting points whose pixel is set in `mask`,
/// ascending. Throws DimensionMismatch if the image sizes differ.
IndexSet points_in_mask(const PixelProjection& projection, const Mask& mask);

}  // namespace plenhance
