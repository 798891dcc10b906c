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
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "plenhance/io.hpp"
#include "plenhance/types.hpp"

namespace plenhance::synth {

// Scene frame: x right, y down, z forward. The lidar sits at the origin and
// the ground is the plane y = ground_height. The camera looks along +z from
// camera_offset with no rotation.

enum class Shape { kBox, kCylinder };

struct ObjectTemplate {
  std::string name;
  ClassId label = 0;
  Shape shape = Shape::kBox;
  // Box: width (x), height (y), length (z). Cylinder: radius, height, unused.
  std::array<double, 3> size{};
};

struct SceneSpec {
  std::uint64_t rng_seed = 0;
  std::uint32_t n_objects = 8;
  std::vector<ObjectTemplate> templates;  // empty means default_templates()
  std::uint32_t num_classes = 6;
  ClassId ground_class = 0;
  ClassId background_class = 1;

  std::uint32_t image_width = 480;
  std::uint32_t image_height = 270;
  double focal_length = 300.0;  // pixels

  double ground_height = 1.8;   // meters below the sensors
  double wall_distance = 40.0;  // depth of the background wall
  double object_depth_min = 7.0;
  double object_depth_max = 22.0;

  std::uint32_t points_per_object = 300;  // lidar-visible points per object
  std::uint32_t ground_points = 3000;
  std::uint32_t wall_points = 2000;

  std::array<double, 3> camera_offset{0.6, -0.3, 0.0};

  std::vector<double> seed_fraction;  // per class; empty means 0.15 for all
  double noise_rate = 0.05;

  std::uint32_t n_merged_masks = 2;  // unions of two nearby objects
  std::uint32_t n_region_masks = 3;  // coarse elliptic regions

  /// Throws InfeasibleSpec on out-of-domain values.
  void validate() const;
  double seed_fraction_for(ClassId c) const;
};

std::vector<ObjectTemplate> default_templates();
SceneSpec default_spec();

nlohmann::json spec_to_json(const SceneSpec& spec);
/// Strict; omitted keys keep default_spec() values.
SceneSpec spec_from_json(const nlohmann::json& doc);

struct Object {
  ObjectTemplate kind;
  double center_x = 0.0;  // footprint center
  double center_z = 0.0;

  /// Nearest t > min_t where origin + t * dir enters or leaves the solid.
  /// `origin` is expressed with the ground at y = 0 (the object's base).
  std::optional<double> intersect(const std::array<double, 3>& origin,
                                  const std::array<double, 3>& dir,
                                  double min_t) const;
};

struct SceneGeometry {
  std::vector<Object> objects;
  double ground_height = 1.8;
  double wall_distance = 40.0;
  std::array<double, 3> camera_center{};
  double focal_length = 300.0;
  std::uint32_t image_width = 0;
  std::uint32_t image_height = 0;

  CameraModel camera() const;
  /// True when a segment from `from` to `to` crosses any object before
  /// reaching `to`.
  bool occluded(const std::array<double, 3>& from,
                const std::array<double, 3>& to) const;
};

inline constexpr std::int32_t kSurfaceGround = -2;
inline constexpr std::int32_t kSurfaceWall = -3;

enum class MaskKind { kObject, kMerged, kRegion, kGround, kWall };

struct MaskOrigin {
  MaskKind kind = MaskKind::kObject;
  std::int32_t object = -1;  // object index for kObject
  ClassId label = kIgnore;   // class of the surface for kObject/kGround/kWall
};

struct SyntheticScene {
  SceneGeometry geometry;
  PointCloud cloud;
  LabelVector gt;
  LabelVector seeds;
  MaskSet masks;
  CameraModel camera;
  std::vector<MaskOrigin> mask_origins;   // parallel to masks
  std::vector<std::int32_t> surface;      // per point: object index or kSurface*
  std::vector<std::uint8_t> camera_visible;  // per point
};

/// Builds a scene from fixed geometry and lidar points. Computes ground
/// truth, camera visibility and masks; seeds are left all-IGNORE.
///
/// Object masks are the pixels whose camera ray first hits the object,
/// minus pixels holding a camera-visible point of another surface. Points
/// that the lidar sees but the camera does not are therefore the only ones
/// that can land in a foreign object mask.
SyntheticScene assemble_scene(const SceneGeometry& geometry,
                              std::vector<Point3f> points,
                              std::vector<std::int32_t> surface,
                              const SceneSpec& spec);

/// Deterministic in spec.rng_seed. Throws InfeasibleSpec.
SyntheticScene generate_scene(const SceneSpec& spec);

/// Points whose pixel lies in an object mask of a different class.
IndexSet misaligned_points(const SyntheticScene& scene);
std::size_t count_misaligned(const SyntheticScene& scene);

/// Writes the five scene files under out_dir/id/ and returns the manifest
/// entry with paths relative to out_dir.
io::SceneManifest write_scene(const std::filesystem::path& out_dir,
                              const std::string& id,
                              const SyntheticScene& scene);

}  // namespace plenhance::synth
