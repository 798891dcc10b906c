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
#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "plenhance/types.hpp"

namespace plenhance {

/// B_j split by current label: B_j^c for each class present, plus B_j^ignore.
struct ClassPartition {
  std::map<ClassId, IndexSet> by_class;
  IndexSet ignore;

  std::size_t total() const;
  std::size_t valid() const { return total() - ignore.size(); }
};

ClassPartition partition_by_class(std::span<const PointIndex> members,
                                  std::span<const ClassId> labels);

/// argmax_c |B_j^c|; ties go to the lowest class id.
std::optional<ClassId> dominant_class(const ClassPartition& partition,
                                      TieBreak tie_break = TieBreak::kLowestClassId);

// Mask-filtering constraints. All comparisons are inclusive.
bool check_mask_size(const Mask& mask, std::uint32_t image_height,
                     std::uint32_t image_width, double lambda_s);
/// Throws ZeroDenominator when the partition holds no valid label.
bool check_purity(const ClassPartition& partition, ClassId dominant,
                  double lambda_p);
bool check_representativity(const ClassPartition& partition, ClassId dominant,
                            double lambda_r);

enum class FilterFailure : std::uint8_t {
  kNone = 0,
  kNoPoints = 1 << 0,
  kNoValidLabels = 1 << 1,
  kSize = 1 << 2,
  kPurity = 1 << 3,
  kRepresentativity = 1 << 4,
};

struct MaskLabelDecision {
  std::optional<ClassId> label;  // nullopt means Ignore
  IndexSet seeds;                // B_j^c~
  IndexSet unlabeled;            // B_j^ignore
  std::uint8_t failures = 0;     // FilterFailure bits when Ignore
  std::size_t member_count = 0;  // |B_j|
  double size_ratio = 0.0;
  double purity = 0.0;
  double representativity = 0.0;

  bool assigned() const noexcept { return label.has_value(); }
  bool failed(FilterFailure f) const noexcept {
    return (failures & static_cast<std::uint8_t>(f)) != 0;
  }
  /// Names of the failed checks: "no_points", "no_valid_labels", "size",
  /// "purity", "representativity".
  std::vector<std::string_view> failure_names() const;
};

/// Majority vote gated by the size, purity and representativity checks.
/// With `config.mask_filter == false` every mask with a dominant class is
/// assigned. Empty or all-IGNORE members always yield Ignore.
MaskLabelDecision assign_mask_label(const Mask& mask,
                                    std::span<const PointIndex> members,
                                    std::span<const ClassId> labels,
                                    std::uint32_t image_height,
                                    std::uint32_t image_width,
                                    const EnhancementConfig& config);

}  // namespace plenhance
