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

#include "plenhance/spatial_index.hpp"

#include <algorithm>
#include <numeric>

namespace plenhance {

namespace {
constexpr std::uint32_t kLeafSize = 8;
}

KdTree::KdTree(const PointCloud& cloud, std::span<const PointIndex> subset)
    : ids_(subset.begin(), subset.end()) {
  pts_.reserve(ids_.size());
  for (PointIndex k : ids_) pts_.push_back(cloud[k]);
  if (!ids_.empty()) {
    nodes_.reserve(2 * (ids_.size() / kLeafSize + 1));
    build(0, static_cast<std::uint32_t>(ids_.size()));
  }
}

std::int32_t KdTree::build(std::uint32_t begin, std::uint32_t end) {
  const auto self = static_cast<std::int32_t>(nodes_.size());
  nodes_.push_back(Node{begin, end, -1, -1, 0, 0.0F});
  if (end - begin <= kLeafSize) return self;

  // Split on the axis of largest extent.
  float lo[3] = {pts_[begin].x, pts_[begin].y, pts_[begin].z};
  float hi[3] = {lo[0], lo[1], lo[2]};
  for (std::uint32_t i = begin + 1; i < end; ++i) {
    for (std::uint8_t a = 0; a < 3; ++a) {
      lo[a] = std::min(lo[a], coord(pts_[i], a));
      hi[a] = std::max(hi[a], coord(pts_[i], a));
    }
  }
  std::uint8_t axis = 0;
  for (std::uint8_t a = 1; a < 3; ++a) {
    if (hi[a] - lo[a] > hi[axis] - lo[axis]) axis = a;
  }

  // Permute points and ids together through an order vector.
  const std::uint32_t mid = begin + (end - begin) / 2;
  std::vector<std::uint32_t> order(end - begin);
  std::iota(order.begin(), order.end(), begin);
  std::nth_element(order.begin(), order.begin() + (mid - begin), order.end(),
                   [&](std::uint32_t a, std::uint32_t b) {
                     const float ca = coord(pts_[a], axis);
                     const float cb = coord(pts_[b], axis);
                     return ca < cb || (ca == cb && ids_[a] < ids_[b]);
                   });
  std::vector<Point3f> pts(order.size());
  std::vector<PointIndex> ids(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    pts[i] = pts_[order[i]];
    ids[i] = ids_[order[i]];
  }
  std::copy(pts.begin(), pts.end(), pts_.begin() + begin);
  std::copy(ids.begin(), ids.end(), ids_.begin() + begin);

  // Left holds coordinates <= split, right holds >= split.
  const float split = coord(pts_[mid], axis);
  const std::int32_t left = build(begin, mid);
  const std::int32_t right = build(mid, end);
  Node& n = nodes_[static_cast<std::size_t>(self)];
  n.left = left;
  n.right = right;
  n.axis = axis;
  n.split = split;
  return self;
}

std::optional<Neighbor> KdTree::nearest(const Point3f& query,
                                        std::optional<PointIndex> exclude) const {
  if (nodes_.empty()) return std::nullopt;
  double best_sq = std::numeric_limits<double>::infinity();
  PointIndex best_id = 0;
  bool found = false;
  nearest_rec(0, query, exclude, best_sq, best_id, found);
  if (!found) return std::nullopt;
  return Neighbor{best_id, std::sqrt(best_sq)};
}

void KdTree::nearest_rec(std::int32_t node, const Point3f& q,
                         std::optional<PointIndex> exclude, double& best_sq,
                         PointIndex& best_id, bool& found) const {
  const Node& n = nodes_[static_cast<std::size_t>(node)];
  if (n.left < 0) {
    for (std::uint32_t i = n.begin; i < n.end; ++i) {
      if (exclude && ids_[i] == *exclude) continue;
      const double d2 = squared_distance(q, pts_[i]);
      if (!found || d2 < best_sq || (d2 == best_sq && ids_[i] < best_id)) {
        best_sq = d2;
        best_id = ids_[i];
        found = true;
      }
    }
    return;
  }
  const double diff = static_cast<double>(coord(q, n.axis)) - n.split;
  const std::int32_t near = diff < 0.0 ? n.left : n.right;
  const std::int32_t far = diff < 0.0 ? n.right : n.left;
  nearest_rec(near, q, exclude, best_sq, best_id, found);
  // <= keeps equal-distance candidates reachable for the index tie-break.
  if (!found || diff * diff <= best_sq) {
    nearest_rec(far, q, exclude, best_sq, best_id, found);
  }
}

SpatialIndex::SpatialIndex(const PointCloud& cloud,
                           std::span<const PointIndex> subset)
    : cloud_(&cloud) {
  insert(subset);
}

void SpatialIndex::insert(std::span<const PointIndex> batch) {
  if (batch.empty()) return;
  std::vector<PointIndex> merged(batch.begin(), batch.end());
  // Absorb every tree that is not at least twice the size of what we carry.
  while (!trees_.empty() && trees_.back().size() <= 2 * merged.size()) {
    const auto ids = trees_.back().ids();
    merged.insert(merged.end(), ids.begin(), ids.end());
    trees_.pop_back();
  }
  size_ += batch.size();
  trees_.emplace_back(*cloud_, merged);
}

std::optional<Neighbor> SpatialIndex::nearest(
    const Point3f& query, std::optional<PointIndex> exclude) const {
  std::optional<Neighbor> best;
  for (const auto& tree : trees_) {
    auto cand = tree.nearest(query, exclude);
    if (!cand) continue;
    if (!best || cand->distance < best->distance ||
        (cand->distance == best->distance && cand->index < best->index)) {
      best = cand;
    }
  }
  return best;
}

}  // namespace plenhance
