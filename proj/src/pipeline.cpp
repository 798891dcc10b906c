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

#include "plenhance/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <numeric>
#include <thread>

#include "plenhance/mla.hpp"
#include "plenhance/projection.hpp"

namespace plenhance {

std::size_t EnhancementReport::masks_assigned() const {
  return static_cast<std::size_t>(std::count_if(
      masks.begin(), masks.end(),
      [](const MaskRecord& r) { return r.assigned(); }));
}

std::size_t EnhancementReport::total_newly_labeled() const {
  std::size_t total = 0;
  for (const auto& r : masks) total += r.newly_labeled;
  return total;
}

std::vector<std::size_t> order_masks(const MaskSet& masks, MaskOrder order) {
  std::vector<std::size_t> seq(masks.size());
  std::iota(seq.begin(), seq.end(), std::size_t{0});
  std::sort(seq.begin(), seq.end(), [&](std::size_t a, std::size_t b) {
    const auto area_a = masks[a].area();
    const auto area_b = masks[b].area();
    if (area_a != area_b) {
      return order == MaskOrder::kAreaAscending ? area_a < area_b
                                                : area_a > area_b;
    }
    return masks[a].id() < masks[b].id();
  });
  return seq;
}

EnhancementResult enhance_scene(const Scene& scene,
                                const EnhancementConfig& config,
                                std::string scene_id,
                                const TraceSink& trace_sink) {
  config.validate();
  const auto& cloud = scene.cloud();
  const auto& masks = scene.masks();
  const std::uint32_t height = scene.camera().image_height();
  const std::uint32_t width = scene.camera().image_width();

  EnhancementReport report;
  report.scene_id = std::move(scene_id);
  report.config = config;
  report.labels_before = scene.labels().count_labeled();

  std::vector<ClassId> working(scene.labels().values().begin(),
                               scene.labels().values().end());
  const PixelProjection projection = project_points(cloud, scene.camera());
  const PropagationParams params = PropagationParams::from_config(config);

  for (std::size_t j : order_masks(masks, config.mask_order)) {
    const Mask& mask = masks[j];
    const IndexSet members = points_in_mask(projection, mask);
    const MaskLabelDecision decision =
        assign_mask_label(mask, members, working, height, width, config);

    MaskRecord record;
    record.mask_id = mask.id();
    record.area = mask.area();
    record.points = members.size();
    record.seeds = decision.seeds.size();
    record.unlabeled = decision.unlabeled.size();
    if (decision.assigned()) {
      record.label = decision.label;
      const bool gapp = config.method == PropagationMethod::kGapp;
      PropagationTrace trace;
      const PropagationResult prop =
          gapp ? gapp_propagate(cloud, decision.seeds, decision.unlabeled,
                                *decision.label, params, working,
                                trace_sink ? &trace : nullptr)
               : direct_propagate(decision.seeds, decision.unlabeled,
                                  *decision.label, working);
      record.newly_labeled = prop.newly_labeled.size();
      record.rounds = prop.rounds;
      if (gapp && trace_sink) trace_sink(record, trace);
    } else {
      for (auto name : decision.failure_names()) record.failed.emplace_back(name);
    }
    report.masks.push_back(std::move(record));
  }

  LabelVector out(std::move(working), scene.labels().num_classes());
  report.labels_after = out.count_labeled();
  return {std::move(out), std::move(report)};
}

std::vector<BatchItem> enhance_batch(std::span<const SceneParts> scenes,
                                     const EnhancementConfig& config,
                                     unsigned threads) {
  std::vector<BatchItem> items(scenes.size());
  std::atomic<std::size_t> next{0};

  auto worker = [&]() {
    for (std::size_t i = next++; i < scenes.size(); i = next++) {
      const SceneParts& parts = scenes[i];
      BatchItem& item = items[i];
      item.id = parts.id;
      try {
        Scene scene =
            validate_scene(parts.cloud, parts.labels, parts.masks, parts.camera);
        item.result = enhance_scene(scene, config, parts.id);
      } catch (const Error& e) {
        item.error_code = e.code();
        item.error = e.what();
      }
    }
  };

  const unsigned n_workers = static_cast<unsigned>(
      std::min<std::size_t>(std::max(1U, threads), scenes.size()));
  if (n_workers <= 1) {
    worker();
    return items;
  }
  std::vector<std::jthread> pool;
  pool.reserve(n_workers);
  for (unsigned t = 0; t < n_workers; ++t) pool.emplace_back(worker);
  pool.clear();  // joins
  return items;
}

}  // namespace plenhance
