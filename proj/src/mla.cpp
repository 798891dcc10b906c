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

#include "plenhance/mla.hpp"

#include "plenhance/error.hpp"

namespace plenhance {

std::size_t ClassPartition::total() const {
  std::size_t n = ignore.size();
  for (const auto& [c, members] : by_class) n += members.size();
  return n;
}

ClassPartition partition_by_class(std::span<const PointIndex> members,
                                  std::span<const ClassId> labels) {
  ClassPartition part;
  for (PointIndex k : members) {
    const ClassId c = labels[k];
    if (c == kIgnore) {
      part.ignore.push_back(k);
    } else {
      part.by_class[c].push_back(k);
    }
  }
  return part;
}

std::optional<ClassId> dominant_class(const ClassPartition& partition,
                                      TieBreak /*tie_break*/) {
  // std::map iterates in ascending class id, so keeping the first strict
  // maximum implements kLowestClassId.
  std::optional<ClassId> best;
  std::size_t best_count = 0;
  for (const auto& [c, members] : partition.by_class) {
    if (members.size() > best_count) {
      best = c;
      best_count = members.size();
    }
  }
  return best;
}

bool check_mask_size(const Mask& mask, std::uint32_t image_height,
                     std::uint32_t image_width, double lambda_s) {
  const double image_area =
      static_cast<double>(image_height) * static_cast<double>(image_width);
  return static_cast<double>(mask.area()) / image_area <= lambda_s;
}

namespace {

std::size_t class_count(const ClassPartition& partition, ClassId c) {
  auto it = partition.by_class.find(c);
  return it == partition.by_class.end() ? 0 : it->second.size();
}

double purity_ratio(const ClassPartition& partition, ClassId dominant) {
  const std::size_t valid = partition.valid();
  if (valid == 0) {
    throw Error(ErrorCode::kZeroDenominator,
                "purity is undefined for a mask without valid labels");
  }
  return static_cast<double>(class_count(partition, dominant)) /
         static_cast<double>(valid);
}

double representativity_ratio(const ClassPartition& partition,
                              ClassId dominant) {
  return static_cast<double>(class_count(partition, dominant)) /
         static_cast<double>(partition.total());
}

}  // namespace

bool check_purity(const ClassPartition& partition, ClassId dominant,
                  double lambda_p) {
  return purity_ratio(partition, dominant) >= lambda_p;
}

bool check_representativity(const ClassPartition& partition, ClassId dominant,
                            double lambda_r) {
  if (partition.total() == 0) return false;
  return representativity_ratio(partition, dominant) >= lambda_r;
}

std::vector<std::string_view> MaskLabelDecision::failure_names() const {
  std::vector<std::string_view> names;
  if (failed(FilterFailure::kNoPoints)) names.emplace_back("no_points");
  if (failed(FilterFailure::kNoValidLabels)) names.emplace_back("no_valid_labels");
  if (failed(FilterFailure::kSize)) names.emplace_back("size");
  if (failed(FilterFailure::kPurity)) names.emplace_back("purity");
  if (failed(FilterFailure::kRepresentativity)) {
    names.emplace_back("representativity");
  }
  return names;
}

MaskLabelDecision assign_mask_label(const Mask& mask,
                                    std::span<const PointIndex> members,
                                    std::span<const ClassId> labels,
                                    std::uint32_t image_height,
                                    std::uint32_t image_width,
                                    const EnhancementConfig& config) {
  MaskLabelDecision decision;
  decision.member_count = members.size();
  decision.size_ratio = static_cast<double>(mask.area()) /
                        (static_cast<double>(image_height) * image_width);

  auto fail = [&decision](FilterFailure f) {
    decision.failures |= static_cast<std::uint8_t>(f);
  };

  if (members.empty()) {
    fail(FilterFailure::kNoPoints);
    return decision;
  }
  ClassPartition part = partition_by_class(members, labels);
  const auto dominant = dominant_class(part, config.tie_break);
  if (!dominant) {
    fail(FilterFailure::kNoValidLabels);
    return decision;
  }
  decision.purity = purity_ratio(part, *dominant);
  decision.representativity = representativity_ratio(part, *dominant);

  if (config.mask_filter) {
    if (!check_mask_size(mask, image_height, image_width, config.lambda_s)) {
      fail(FilterFailure::kSize);
    }
    if (!check_purity(part, *dominant, config.lambda_p)) {
      fail(FilterFailure::kPurity);
    }
    if (!check_representativity(part, *dominant, config.lambda_r)) {
      fail(FilterFailure::kRepresentativity);
    }
    if (decision.failures != 0) return decision;
  }

  decision.label = *dominant;
  decision.seeds = std::move(part.by_class[*dominant]);
  decision.unlabeled = std::move(part.ignore);
  return decision;
}

}  // namespace plenhance
