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

#include "plenhance/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>

#include "plenhance/error.hpp"

namespace plenhance {

LabelStats::LabelStats(std::uint32_t num_classes)
    : predicted_(num_classes, 0), correct_(num_classes, 0) {}

std::optional<double> LabelStats::accuracy(ClassId c) const {
  const auto i = static_cast<std::size_t>(c);
  if (predicted_[i] == 0) return std::nullopt;
  return static_cast<double>(correct_[i]) / static_cast<double>(predicted_[i]);
}

double LabelStats::avg_accuracy() const {
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t c = 0; c < predicted_.size(); ++c) {
    if (auto acc = accuracy(static_cast<ClassId>(c))) {
      sum += *acc;
      ++n;
    }
  }
  return n == 0 ? 0.0 : sum / static_cast<double>(n);
}

bool LabelStats::avg_defined() const {
  return std::any_of(predicted_.begin(), predicted_.end(),
                     [](std::uint64_t n) { return n > 0; });
}

std::uint64_t LabelStats::total_correct() const {
  return std::accumulate(correct_.begin(), correct_.end(), std::uint64_t{0});
}

std::uint64_t LabelStats::total_predicted() const {
  return std::accumulate(predicted_.begin(), predicted_.end(), std::uint64_t{0});
}

double LabelStats::coverage() const {
  return evaluated_ == 0 ? 0.0
                         : static_cast<double>(covered_) /
                               static_cast<double>(evaluated_);
}

void LabelStats::add(ClassId pred, ClassId gt) {
  if (gt == kIgnore) return;
  ++evaluated_;
  if (pred == kIgnore) return;
  ++covered_;
  const auto i = static_cast<std::size_t>(pred);
  ++predicted_[i];
  if (pred == gt) ++correct_[i];
}

void LabelStats::merge(const LabelStats& other) {
  if (other.predicted_.size() != predicted_.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "cannot merge stats over " + std::to_string(predicted_.size()) +
                    " and " + std::to_string(other.predicted_.size()) +
                    " classes");
  }
  for (std::size_t c = 0; c < predicted_.size(); ++c) {
    predicted_[c] += other.predicted_[c];
    correct_[c] += other.correct_[c];
  }
  evaluated_ += other.evaluated_;
  covered_ += other.covered_;
}

LabelStats compute_stats(const LabelVector& pred, const LabelVector& gt) {
  if (pred.size() != gt.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "prediction has " + std::to_string(pred.size()) +
                    " labels, ground truth " + std::to_string(gt.size()));
  }
  LabelStats stats(std::max(pred.num_classes(), gt.num_classes()));
  for (std::size_t k = 0; k < pred.size(); ++k) {
    const auto i = static_cast<PointIndex>(k);
    stats.add(pred[i], gt[i]);
  }
  return stats;
}

double compute_increment(const LabelStats& before, const LabelStats& after) {
  const auto base = before.total_correct();
  if (base == 0) {
    throw Error(ErrorCode::kZeroBaseline,
                "increment is undefined without correct labels before");
  }
  const double delta = static_cast<double>(after.total_correct()) -
                       static_cast<double>(base);
  return 100.0 * delta / static_cast<double>(base);
}

nlohmann::json stats_to_json(const LabelStats& stats) {
  nlohmann::json per_class = nlohmann::json::object();
  for (std::uint32_t c = 0; c < stats.num_classes(); ++c) {
    const auto id = static_cast<ClassId>(c);
    auto acc = stats.accuracy(id);
    per_class[std::to_string(c)] = {
        {"accuracy", acc ? nlohmann::json(*acc) : nlohmann::json(nullptr)},
        {"predicted", stats.predicted(id)},
        {"correct", stats.correct(id)}};
  }
  return {{"per_class", std::move(per_class)},
          {"avg_accuracy", stats.avg_accuracy()},
          {"avg_defined", stats.avg_defined()},
          {"total_correct", stats.total_correct()},
          {"total_predicted", stats.total_predicted()},
          {"evaluated_points", stats.evaluated_points()},
          {"coverage", stats.coverage()}};
}

std::string format_increment(double percent) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%+.2f%%", percent);
  return buf;
}

}  // namespace plenhance
