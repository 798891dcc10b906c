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

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "plenhance/error.hpp"
#include "plenhance/gapp.hpp"
#include "plenhance/types.hpp"

namespace plenhance {

struct MaskRecord {
  std::int64_t mask_id = 0;
  std::uint64_t area = 0;
  std::optional<ClassId> label;       // set when the mask was assigned
  std::vector<std::string> failed;    // failed checks when ignored
  std::size_t points = 0;             // |B_j|
  std::size_t seeds = 0;              // |B_j^c~|
  std::size_t unlabeled = 0;          // |B_j^ignore|
  std::size_t newly_labeled = 0;
  std::size_t rounds = 0;

  bool assigned() const noexcept { return label.has_value(); }
};

struct EnhancementReport {
  std::string scene_id;
  EnhancementConfig config;
  std::vector<MaskRecord> masks;  // in processing order
  std::size_t labels_before = 0;
  std::size_t labels_after = 0;

  std::size_t masks_assigned() const;
  std::size_t masks_ignored() const { return masks.size() - masks_assigned(); }
  std::size_t total_newly_labeled() const;
};

struct EnhancementResult {
  LabelVector labels;
  EnhancementReport report;
};

/// Processing sequence as positions into `masks`: by area (ascending or
/// descending), ties by ascending mask id.
std::vector<std::size_t> order_masks(const MaskSet& masks, MaskOrder order);

/// Called for every assigned mask propagated with GAPP, in processing order.
using TraceSink = std::function<void(const MaskRecord&, const PropagationTrace&)>;

/// Runs the whole enhancement over one scene: project once, then for each
/// mask in order compute its member points, vote a label, and propagate it
/// into the working labels before moving to the next mask. Labels present in
/// the input are never changed.
EnhancementResult enhance_scene(const Scene& scene,
                                const EnhancementConfig& config,
                                std::string scene_id = {},
                                const TraceSink& trace_sink = {});

/// Unvalidated parts of one scene, as read from disk.
struct SceneParts {
  std::string id;
  PointCloud cloud;
  LabelVector labels;
  MaskSet masks;
  CameraModel camera;
};

struct BatchItem {
  std::string id;
  std::optional<EnhancementResult> result;
  std::optional<ErrorCode> error_code;
  std::string error;  // empty on success
};

/// Enhances each scene independently using up to `threads` workers. Output
/// order matches input order; a failing scene produces an error item and the
/// rest of the batch continues.
std::vector<BatchItem> enhance_batch(std::span<const SceneParts> scenes,
                                     const EnhancementConfig& config,
                                     unsigned threads = 1);

}  // namespace plenhance
