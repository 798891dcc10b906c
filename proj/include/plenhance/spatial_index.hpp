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

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "plenhance/types.hpp"

namespace plenhance {

struct Neighbor {
  PointIndex index = 0;
  double distance = 0.0;
};

/// Static 3-d tree over a subset of a cloud. Distances are computed with
/// squared_distance()/distance() so results match a linear scan bit for bit.
class KdTree {
 public:
  KdTree() = default;
  KdTree(const PointCloud& cloud, std::span<const PointIndex> subset);

  std::size_t size() const noexcept { return ids_.size(); }
  bool empty() const noexcept { return ids_.empty(); }
  std::span<const PointIndex> ids() const noexcept { return ids_; }

  /// Nearest entry to `query`, skipping `exclude`. Equal distances resolve
  /// to the lower point index.
  std::optional<Neighbor> nearest(const Point3f& query,
                                  std::optional<PointIndex> exclude = {}) const;

  /// Calls fn(index, distance) for every entry with distance <= radius.
  template <typename Fn>
  void for_each_within(const Point3f& query, double radius, Fn&& fn) const;

 private:
  struct Node {
    std::uint32_t begin = 0;
    std::uint32_t end = 0;
    std::int32_t left = -1;
    std::int32_t right = -1;
    std::uint8_t axis = 0;
    float split = 0.0F;
  };

  std::int32_t build(std::uint32_t begin, std::uint32_t end);
  void nearest_rec(std::int32_t node, const Point3f& q,
                   std::optional<PointIndex> exclude, double& best_sq,
                   PointIndex& best_id, bool& found) const;
  template <typename Fn>
  void within_rec(std::int32_t node, const Point3f& q, double radius,
                  Fn& fn) const;

  static float coord(const Point3f& p, std::uint8_t axis) {
    return axis == 0 ? p.x : (axis == 1 ? p.y : p.z);
  }

  std::vector<Point3f> pts_;
  std::vector<PointIndex> ids_;
  std::vector<Node> nodes_;
};

/// Nearest-neighbor index supporting batch insertion. Keeps O(log n) static
/// trees whose sizes at least double from newest to oldest (logarithmic
/// method), so inserts cost amortized O(log^2 n) per point.
///
/// Holds a pointer to `cloud`; the cloud must outlive the index.
class SpatialIndex {
 public:
  SpatialIndex(const PointCloud& cloud, std::span<const PointIndex> subset);

  void insert(std::span<const PointIndex> batch);

  std::size_t size() const noexcept { return size_; }
  std::size_t tree_count() const noexcept { return trees_.size(); }

  std::optional<Neighbor> nearest(const Point3f& query,
                                  std::optional<PointIndex> exclude = {}) const;

  template <typename Fn>
  void for_each_within(const Point3f& query, double radius, Fn&& fn) const {
    for (const auto& tree : trees_) tree.for_each_within(query, radius, fn);
  }

 private:
  const PointCloud* cloud_;
  std::vector<KdTree> trees_;  // sizes non-increasing
  std::size_t size_ = 0;
};

template <typename Fn>
void KdTree::for_each_within(const Point3f& query, double radius,
                             Fn&& fn) const {
  if (nodes_.empty()) return;
  within_rec(0, query, radius, fn);
}

template <typename Fn>
void KdTree::within_rec(std::int32_t node, const Point3f& q, double radius,
                        Fn& fn) const {
  const Node& n = nodes_[static_cast<std::size_t>(node)];
  if (n.left < 0) {
    for (std::uint32_t i = n.begin; i < n.end; ++i) {
      const double d = distance(q, pts_[i]);
      if (d <= radius) fn(ids_[i], d);
    }
    return;
  }
  const double diff = static_cast<double>(coord(q, n.axis)) - n.split;
  const std::int32_t near = diff < 0.0 ? n.left : n.right;
  const std::int32_t far = diff < 0.0 ? n.right : n.left;
  within_rec(near, q, radius, fn);
  if (std::sqrt(diff * diff) <= radius) within_rec(far, q, radius, fn);
}

}  // namespace plenhance
