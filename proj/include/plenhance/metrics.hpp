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
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "plenhance/types.hpp"

namespace plenhance {

/// Pseudo-label quality against ground truth. Holds raw counts so that stats
/// of several scenes can be merged before the ratios are taken. Points whose
/// ground truth is IGNORE are left out of every count.
class LabelStats {
 public:
  LabelStats() = default;
  explicit LabelStats(std::uint32_t num_classes);

  std::uint32_t num_classes() const noexcept {
    return static_cast<std::uint32_t>(predicted_.size());
  }

  /// Correct / predicted for class c; nullopt when nothing was predicted as c.
  std::optional<double> accuracy(ClassId c) const;
  /// Macro mean over classes with at least one prediction; 0 when none.
  double avg_accuracy() const;
  /// False when no class has a prediction (avg_accuracy() is then 0).
  bool avg_defined() const;
  std::uint64_t total_correct() const;
  std::uint64_t total_predicted() const;
  /// Labeled fraction of the evaluated points; 0 when nothing was evaluated.
  double coverage() const;

  std::uint64_t predicted(ClassId c) const { return predicted_[static_cast<std::size_t>(c)]; }
  std::uint64_t correct(ClassId c) const { return correct_[static_cast<std::size_t>(c)]; }
  std::uint64_t evaluated_points() const noexcept { return evaluated_; }

  void add(ClassId pred, ClassId gt);
  /// Count-wise sum; throws DimensionMismatch on differing class counts.
  void merge(const LabelStats& other);

 private:
  std::vector<std::uint64_t> predicted_;
  std::vector<std::uint64_t> correct_;
  std::uint64_t evaluated_ = 0;
  std::uint64_t covered_ = 0;
};

/// Throws DimensionMismatch when lengths differ.
LabelStats compute_stats(const LabelVector& pred, const LabelVector& gt);

/// 100 * (after.correct - before.correct) / before.correct, in percent.
/// Throws ZeroBaseline when before has no correct label.
double compute_increment(const LabelStats& before, const LabelStats& after);

/// Table-shaped JSON: per-class accuracy, avg accuracy, coverage, totals.
nlohmann::json stats_to_json(const LabelStats& stats);

/// Formats a percentage with two decimals and an explicit sign, "+38.18%".
std::string format_increment(double percent);

}  // namespace plenhance
