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

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace plenhance {

using PointIndex = std::uint32_t;
using IndexSet = std::vector<PointIndex>;  // sorted ascending, no duplicates
using ClassId = std::int32_t;

inline constexpr ClassId kIgnore = -1;

struct Point3f {
  float x = 0.0F;
  float y = 0.0F;
  float z = 0.0F;

  friend bool operator==(const Point3f&, const Point3f&) = default;
};

/// Euclidean distance between two cloud points, evaluated in double in a
/// fixed operation order. Every distance comparison in the engine (indexed or
/// brute force) goes through this function so that both paths see
/// bit-identical values.
double distance(const Point3f& a, const Point3f& b);
double squared_distance(const Point3f& a, const Point3f& b);

/// N points with finite coordinates in meters. Index k names point o_k.
class PointCloud {
 public:
  PointCloud() = default;
  explicit PointCloud(std::vector<Point3f> points);

  std::size_t size() const noexcept { return points_.size(); }
  bool empty() const noexcept { return points_.empty(); }
  const Point3f& operator[](PointIndex k) const { return points_[k]; }
  std::span<const Point3f> points() const noexcept { return points_; }

  friend bool operator==(const PointCloud&, const PointCloud&) = default;

 private:
  std::vector<Point3f> points_;
};

/// Per-point class ids in [0, num_classes) or kIgnore.
class LabelVector {
 public:
  LabelVector() = default;
  LabelVector(std::vector<ClassId> labels, std::uint32_t num_classes);

  std::size_t size() const noexcept { return labels_.size(); }
  std::uint32_t num_classes() const noexcept { return num_classes_; }
  ClassId operator[](PointIndex k) const { return labels_[k]; }
  std::span<const ClassId> values() const noexcept { return labels_; }
  std::size_t count_labeled() const;

  friend bool operator==(const LabelVector&, const LabelVector&) = default;

 private:
  std::vector<ClassId> labels_;
  std::uint32_t num_classes_ = 0;
};

/// Binary H x W bitmap, row-major; bitmap[v][u] with v the row.
class Mask {
 public:
  Mask() = default;
  /// Throws AreaMismatch when `area` differs from the bitmap popcount and
  /// DimensionMismatch when the bitmap is not height * width long.
  Mask(std::int64_t id, std::uint32_t height, std::uint32_t width,
       std::vector<std::uint8_t> bitmap, std::uint64_t area);

  static Mask from_bitmap(std::int64_t id, std::uint32_t height,
                          std::uint32_t width, std::vector<std::uint8_t> bitmap);

  std::int64_t id() const noexcept { return id_; }
  std::uint32_t height() const noexcept { return height_; }
  std::uint32_t width() const noexcept { return width_; }
  std::uint64_t area() const noexcept { return area_; }
  bool at(std::uint32_t v, std::uint32_t u) const {
    return bitmap_[static_cast<std::size_t>(v) * width_ + u] != 0;
  }
  std::span<const std::uint8_t> bitmap() const noexcept { return bitmap_; }

  friend bool operator==(const Mask&, const Mask&) = default;

 private:
  std::int64_t id_ = 0;
  std::uint32_t height_ = 0;
  std::uint32_t width_ = 0;
  std::vector<std::uint8_t> bitmap_;
  std::uint64_t area_ = 0;
};

/// Masks may overlap; they all share the image dimensions.
class MaskSet {
 public:
  MaskSet() = default;
  MaskSet(std::vector<Mask> masks, std::uint32_t image_height,
          std::uint32_t image_width);

  std::size_t size() const noexcept { return masks_.size(); }
  const Mask& operator[](std::size_t j) const { return masks_[j]; }
  std::span<const Mask> masks() const noexcept { return masks_; }
  std::uint32_t image_height() const noexcept { return image_height_; }
  std::uint32_t image_width() const noexcept { return image_width_; }

  friend bool operator==(const MaskSet&, const MaskSet&) = default;

 private:
  std::vector<Mask> masks_;
  std::uint32_t image_height_ = 0;
  std::uint32_t image_width_ = 0;
};

/// Pinhole projection: (a, b, d) = P * (x, y, z, 1), P row-major 3 x 4.
class CameraModel {
 public:
  CameraModel() = default;
  CameraModel(const std::array<double, 12>& projection,
              std::uint32_t image_height, std::uint32_t image_width);

  const std::array<double, 12>& projection() const noexcept { return p_; }
  std::uint32_t image_height() const noexcept { return image_height_; }
  std::uint32_t image_width() const noexcept { return image_width_; }

  friend bool operator==(const CameraModel&, const CameraModel&) = default;

 private:
  std::array<double, 12> p_{};
  std::uint32_t image_height_ = 0;
  std::uint32_t image_width_ = 0;
};

enum class MaskOrder { kAreaAscending, kAreaDescending };
enum class TieBreak { kLowestClassId };
enum class SingleSeedPolicy { kSkip, kFixedRadius };
enum class PropagationMethod { kGapp, kDp };

std::string_view to_string(MaskOrder order);
std::string_view to_string(SingleSeedPolicy policy);
std::string_view to_string(PropagationMethod method);

struct EnhancementConfig {
  double lambda_s = 0.2;  // max mask area / image area
  double lambda_p = 0.8;  // min label purity
  double lambda_r = 0.1;  // min label representativity
  double beta = 2.0;      // exploration distance scale
  MaskOrder mask_order = MaskOrder::kAreaAscending;
  TieBreak tie_break = TieBreak::kLowestClassId;
  SingleSeedPolicy single_seed_policy = SingleSeedPolicy::kSkip;
  double fixed_radius = 0.0;  // meters; used only with kFixedRadius
  PropagationMethod method = PropagationMethod::kGapp;
  // When false every mask with a dominant class is assigned (the "no mask
  // filtering" ablation).
  bool mask_filter = true;

  /// Throws OutOfRange on any field outside its domain.
  void validate() const;

  friend bool operator==(const EnhancementConfig&,
                         const EnhancementConfig&) = default;
};

/// Cross-validated inputs of one scene. Only validate_scene constructs it.
class Scene {
 public:
  const PointCloud& cloud() const noexcept { return cloud_; }
  const LabelVector& labels() const noexcept { return labels_; }
  const MaskSet& masks() const noexcept { return masks_; }
  const CameraModel& camera() const noexcept { return camera_; }

 private:
  friend Scene validate_scene(PointCloud, LabelVector, MaskSet, CameraModel);
  Scene(PointCloud cloud, LabelVector labels, MaskSet masks,
        CameraModel camera);

  PointCloud cloud_;
  LabelVector labels_;
  MaskSet masks_;
  CameraModel camera_;
};

/// Throws DimensionMismatch, NonFinite or BadLabel.
Scene validate_scene(PointCloud cloud, LabelVector labels, MaskSet masks,
                     CameraModel camera);

}  // namespace plenhance
