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

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "plenhance/pipeline.hpp"
#include "plenhance/types.hpp"

namespace plenhance::io {

namespace fs = std::filesystem;

// Binary point file:
//   "PLPC" | u32 version = 1 | u64 count | count * (f32 x, f32 y, f32 z)
// Binary label file:
//   "PLLB" | u32 version = 1 | u32 num_classes | u64 count | count * i32
// All integers little-endian, floats IEEE-754 binary32.
inline constexpr std::uint32_t kFormatVersion = 1;

std::string encode_points(const PointCloud& cloud);
PointCloud decode_points(std::string_view bytes);
std::string encode_labels(const LabelVector& labels);
LabelVector decode_labels(std::string_view bytes);

// Masks document:
//   {"image_height": H, "image_width": W,
//    "masks": [{"id": i, "area": a, "rle": [r0, r1, ...]}, ...]}
// Runs cover the row-major bitmap, alternating false/true, starting with
// false (the first run may be 0).
std::vector<std::uint64_t> rle_encode(const Mask& mask);
Mask rle_decode(std::int64_t id, std::uint32_t height, std::uint32_t width,
                const std::vector<std::uint64_t>& runs, std::uint64_t area);
nlohmann::json masks_to_json(const MaskSet& masks);
MaskSet masks_from_json(const nlohmann::json& doc);

// Calibration document: {"P": [12 reals, row-major 3x4],
//                        "image_height": H, "image_width": W}
nlohmann::json calibration_to_json(const CameraModel& camera);
CameraModel calibration_from_json(const nlohmann::json& doc);

/// Strict: unknown keys raise UnknownField, bad values OutOfRange. Omitted
/// keys keep their defaults.
EnhancementConfig config_from_json(const nlohmann::json& doc);
nlohmann::json config_to_json(const EnhancementConfig& config);

nlohmann::json report_to_json(const EnhancementReport& report);

// File wrappers. Errors carry the path in their message.
std::string read_file(const fs::path& path);
void write_file(const fs::path& path, std::string_view bytes);
nlohmann::json read_json(const fs::path& path);
void write_json(const fs::path& path, const nlohmann::json& doc);

PointCloud read_points(const fs::path& path);
void write_points(const fs::path& path, const PointCloud& cloud);
LabelVector read_labels(const fs::path& path);
void write_labels(const fs::path& path, const LabelVector& labels);
MaskSet read_masks(const fs::path& path);
void write_masks(const fs::path& path, const MaskSet& masks);
CameraModel read_calibration(const fs::path& path);
void write_calibration(const fs::path& path, const CameraModel& camera);
EnhancementConfig read_config(const fs::path& path);

/// One scene in a manifest. Paths are absolute or relative to the manifest.
struct SceneManifest {
  std::string id;
  fs::path points;
  fs::path labels;
  fs::path masks;
  fs::path calib;
  std::optional<fs::path> gt;
};

// Manifest document: {"scenes": [{"id", "points", "labels", "masks",
//                                 "calib", "gt"?}, ...]}
std::vector<SceneManifest> read_manifest(const fs::path& path);
void write_manifest(const fs::path& path,
                    const std::vector<SceneManifest>& scenes);

struct LoadedScene {
  SceneParts parts;
  std::optional<LabelVector> gt;
};

/// Reads every file of a manifest entry, resolving relative paths against
/// `base_dir`. Throws DimensionMismatch when ground truth and points differ
/// in length.
LoadedScene load_scene(const SceneManifest& entry, const fs::path& base_dir);

}  // namespace plenhance::io
