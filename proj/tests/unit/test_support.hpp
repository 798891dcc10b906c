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
#include <random>
#include <vector>

#include "plenhance/types.hpp"

namespace plenhance::testing {

inline PointCloud line_cloud(const std::vector<float>& xs) {
  std::vector<Point3f> pts;
  for (float x : xs) pts.push_back({x, 0.0F, 0.0F});
  return PointCloud(std::move(pts));
}

inline PointCloud random_cloud(std::mt19937_64& rng, std::size_t n,
                               float extent = 10.0F) {
  std::uniform_real_distribution<float> coord(-extent, extent);
  std::vector<Point3f> pts(n);
  for (auto& p : pts) p = {coord(rng), coord(rng), coord(rng)};
  return PointCloud(std::move(pts));
}

// Cloud with a few tight clusters, so propagation has structure to follow.
inline PointCloud clustered_cloud(std::mt19937_64& rng, std::size_t n,
                                  std::size_t clusters) {
  std::uniform_real_distribution<float> center(-20.0F, 20.0F);
  std::normal_distribution<float> spread(0.0F, 0.8F);
  std::vector<Point3f> centers(clusters);
  for (auto& c : centers) c = {center(rng), center(rng), center(rng)};
  std::vector<Point3f> pts(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& c = centers[i % clusters];
    pts[i] = {c.x + spread(rng), c.y + spread(rng), c.z + spread(rng)};
  }
  return PointCloud(std::move(pts));
}

// Identity-like camera: P = [[f,0,W/2,0],[0,f,H/2,0],[0,0,1,0]].
inline CameraModel simple_camera(std::uint32_t h, std::uint32_t w,
                                 double f = 100.0) {
  return CameraModel({f, 0, w / 2.0, 0, 0, f, h / 2.0, 0, 0, 0, 1, 0}, h, w);
}

inline Mask rect_mask(std::int64_t id, std::uint32_t h, std::uint32_t w,
                      std::uint32_t u0, std::uint32_t v0, std::uint32_t u1,
                      std::uint32_t v1) {
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(h) * w, 0);
  for (std::uint32_t v = v0; v < v1 && v < h; ++v) {
    for (std::uint32_t u = u0; u < u1 && u < w; ++u) bits[v * w + u] = 1;
  }
  return Mask::from_bitmap(id, h, w, std::move(bits));
}

// Small random scene in front of a 64x64 camera: clustered points, each
// cluster one class, sparse seeds, and up to max_masks rectangles.
struct RandomScene {
  PointCloud cloud;
  LabelVector labels;
  MaskSet masks;
  CameraModel camera;
};

inline RandomScene random_scene(std::mt19937_64& rng, std::size_t max_points,
                                std::size_t max_masks,
                                std::uint32_t num_classes = 4) {
  constexpr std::uint32_t kSide = 64;
  std::uniform_int_distribution<std::size_t> n_dist(20, max_points);
  std::uniform_int_distribution<std::size_t> c_dist(1, 6);
  const std::size_t n = n_dist(rng);
  const std::size_t clusters = c_dist(rng);
  std::uniform_real_distribution<float> cx(-3.0F, 3.0F);
  std::uniform_real_distribution<float> cz(3.0F, 12.0F);
  std::normal_distribution<float> spread(0.0F, 0.5F);
  std::uniform_int_distribution<ClassId> cls(0, static_cast<ClassId>(num_classes) - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<Point3f> centers(clusters);
  std::vector<ClassId> center_class(clusters);
  for (std::size_t c = 0; c < clusters; ++c) {
    centers[c] = {cx(rng), cx(rng), cz(rng)};
    center_class[c] = cls(rng);
  }
  const double seed_rate = 0.1 + 0.5 * unit(rng);
  std::vector<Point3f> pts(n);
  std::vector<ClassId> labels(n, kIgnore);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t c = i % clusters;
    pts[i] = {centers[c].x + spread(rng), centers[c].y + spread(rng),
              centers[c].z + spread(rng)};
    if (unit(rng) < seed_rate) {
      labels[i] = unit(rng) < 0.1 ? cls(rng) : center_class[c];
    }
  }

  std::uniform_int_distribution<std::size_t> m_dist(0, max_masks);
  std::uniform_int_distribution<std::uint32_t> coord(0, kSide);
  std::vector<Mask> masks;
  const std::size_t n_masks = m_dist(rng);
  for (std::size_t j = 0; j < n_masks; ++j) {
    std::uint32_t u0 = coord(rng), u1 = coord(rng), v0 = coord(rng), v1 = coord(rng);
    if (u0 > u1) std::swap(u0, u1);
    if (v0 > v1) std::swap(v0, v1);
    masks.push_back(rect_mask(static_cast<std::int64_t>(j * 3 + 1), kSide, kSide,
                              u0, v0, u1, v1));
  }
  return {PointCloud(std::move(pts)), LabelVector(std::move(labels), num_classes),
          MaskSet(std::move(masks), kSide, kSide),
          simple_camera(kSide, kSide, 24.0)};
}

inline EnhancementConfig random_config(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  EnhancementConfig c;
  c.lambda_s = 0.05 + 0.95 * unit(rng);
  c.lambda_p = 0.3 + 0.7 * unit(rng);
  c.lambda_r = 0.3 * unit(rng);
  c.beta = 0.5 + 3.5 * unit(rng);
  c.mask_order = unit(rng) < 0.5 ? MaskOrder::kAreaAscending : MaskOrder::kAreaDescending;
  c.method = unit(rng) < 0.8 ? PropagationMethod::kGapp : PropagationMethod::kDp;
  c.mask_filter = unit(rng) < 0.8;
  if (unit(rng) < 0.3) {
    c.single_seed_policy = SingleSeedPolicy::kFixedRadius;
    c.fixed_radius = 2.0 * unit(rng);
  }
  return c;
}

}  // namespace plenhance::testing
