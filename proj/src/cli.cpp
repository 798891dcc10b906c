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

#include "plenhance/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "plenhance/error.hpp"
#include "plenhance/io.hpp"
#include "plenhance/metrics.hpp"
#include "plenhance/pipeline.hpp"
#include "plenhance/synth.hpp"
#include "plenhance/version.hpp"

namespace plenhance::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string fixed2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string percent_or_dash(const std::optional<double>& v) {
  return v ? fixed2(100.0 * *v) : std::string("-");
}

// ---------------------------------------------------------------------------

struct EnhanceOptions {
  std::string points, labels, masks, calib, out, config, method, report, scene_id;
};

int cmd_enhance(const EnhanceOptions& o, std::ostream& out) {
  EnhancementConfig config =
      o.config.empty() ? EnhancementConfig{} : io::read_config(o.config);
  if (o.method == "dp") config.method = PropagationMethod::kDp;
  if (o.method == "gapp") config.method = PropagationMethod::kGapp;

  Scene scene = validate_scene(io::read_points(o.points), io::read_labels(o.labels),
                               io::read_masks(o.masks),
                               io::read_calibration(o.calib));
  const std::string id =
      o.scene_id.empty() ? fs::path(o.points).stem().string() : o.scene_id;
  EnhancementResult result = enhance_scene(scene, config, id);
  io::write_labels(o.out, result.labels);
  if (!o.report.empty()) {
    io::write_file(o.report, io::report_to_json(result.report).dump(2) + "\n");
  }
  const auto& r = result.report;
  out << "scene=" << r.scene_id << " labels_before=" << r.labels_before
      << " labels_after=" << r.labels_after
      << " masks_assigned=" << r.masks_assigned()
      << " masks_ignored=" << r.masks_ignored() << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct EvalOptions {
  std::string pred, gt, before;
  bool json = false;
};

void print_stats_table(std::ostream& out, const LabelStats& stats,
                       const std::optional<double>& increment) {
  out << std::left << std::setw(12) << "class" << std::right << std::setw(10)
      << "acc(%)" << std::setw(12) << "predicted" << std::setw(10) << "correct"
      << "\n";
  for (std::uint32_t c = 0; c < stats.num_classes(); ++c) {
    const auto id = static_cast<ClassId>(c);
    out << std::left << std::setw(12) << c << std::right << std::setw(10)
        << percent_or_dash(stats.accuracy(id)) << std::setw(12)
        << stats.predicted(id) << std::setw(10) << stats.correct(id) << "\n";
  }
  out << std::left << std::setw(12) << "Avg. Acc." << std::right
      << std::setw(10) << fixed2(100.0 * stats.avg_accuracy())
      << (stats.avg_defined() ? "" : "  (undefined: no predictions)") << "\n";
  out << std::left << std::setw(12) << "Coverage" << std::right << std::setw(10)
      << fixed2(100.0 * stats.coverage()) << "\n";
  if (increment) {
    out << std::left << std::setw(12) << "Total Inc." << std::right
        << std::setw(10) << format_increment(*increment) << "\n";
  }
}

int cmd_eval(const EvalOptions& o, std::ostream& out) {
  const LabelVector pred = io::read_labels(o.pred);
  const LabelVector gt = io::read_labels(o.gt);
  const LabelStats stats = compute_stats(pred, gt);
  std::optional<double> increment;
  if (!o.before.empty()) {
    const LabelStats before = compute_stats(io::read_labels(o.before), gt);
    increment = compute_increment(before, stats);
  }
  if (o.json) {
    json doc = stats_to_json(stats);
    doc["total_increment"] = increment ? json(*increment) : json(nullptr);
    out << doc.dump(2) << "\n";
  } else {
    print_stats_table(out, stats, increment);
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct SynthOptions {
  std::string spec, out_dir;
  std::uint32_t n_scenes = 1;
  std::optional<std::uint64_t> seed;
};

int cmd_synth(const SynthOptions& o, std::ostream& out) {
  synth::SceneSpec spec = o.spec.empty()
                              ? synth::default_spec()
                              : synth::spec_from_json(io::read_json(o.spec));
  if (o.seed) spec.rng_seed = *o.seed;
  spec.validate();

  std::error_code ec;
  fs::create_directories(o.out_dir, ec);
  if (ec) {
    throw Error(ErrorCode::kIo,
                o.out_dir + ": cannot create directory: " + ec.message());
  }
  std::vector<io::SceneManifest> entries;
  for (std::uint32_t i = 0; i < o.n_scenes; ++i) {
    synth::SceneSpec scene_spec = spec;
    scene_spec.rng_seed = spec.rng_seed + i;
    char id[32];
    std::snprintf(id, sizeof id, "scene_%04u", i);
    const synth::SyntheticScene scene = synth::generate_scene(scene_spec);
    entries.push_back(synth::write_scene(o.out_dir, id, scene));
    out << id << " points=" << scene.cloud.size()
        << " masks=" << scene.masks.size()
        << " misaligned=" << synth::count_misaligned(scene) << "\n";
  }
  io::write_manifest(fs::path(o.out_dir) / "manifest.json", entries);
  out << "wrote " << entries.size() << " scene(s) to " << o.out_dir << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct CompareOptions {
  std::string scenes, config;
  bool gt_available = false;
  bool json = false;
};

struct CompareRow {
  std::string name;
  bool dp = false;
  bool mf = false;
  bool gapp = false;
  LabelStats stats;
  std::optional<double> increment;
};

int cmd_compare(const CompareOptions& o, std::ostream& out) {
  const EnhancementConfig base =
      o.config.empty() ? EnhancementConfig{} : io::read_config(o.config);
  const fs::path manifest_path(o.scenes);
  auto entries = io::read_manifest(manifest_path);
  std::sort(entries.begin(), entries.end(),
            [](const auto& a, const auto& b) { return a.id < b.id; });

  std::vector<SceneParts> parts;
  std::vector<LabelVector> gts;
  std::uint32_t num_classes = 0;
  for (const auto& e : entries) {
    if (!e.gt) {
      throw Error(ErrorCode::kIo, o.scenes + ": scene " + e.id +
                                      " has no ground-truth labels");
    }
    io::LoadedScene loaded = io::load_scene(e, manifest_path.parent_path());
    num_classes = std::max({num_classes, loaded.parts.labels.num_classes(),
                            loaded.gt->num_classes()});
    gts.push_back(std::move(*loaded.gt));
    parts.push_back(std::move(loaded.parts));
  }

  std::vector<CompareRow> rows;
  CompareRow initial{"initial", false, false, false, LabelStats(num_classes), {}};
  for (std::size_t i = 0; i < parts.size(); ++i) {
    initial.stats.merge(compute_stats(parts[i].labels, gts[i]));
  }
  rows.push_back(initial);

  struct Variant {
    const char* name;
    PropagationMethod method;
    bool mask_filter;
  };
  const Variant variants[] = {{"DP", PropagationMethod::kDp, false},
                              {"DP+MF", PropagationMethod::kDp, true},
                              {"MF+GAPP", PropagationMethod::kGapp, true}};
  const unsigned threads = batch_threads();
  for (const auto& v : variants) {
    EnhancementConfig cfg = base;
    cfg.method = v.method;
    cfg.mask_filter = v.mask_filter;
    CompareRow row{v.name, v.method == PropagationMethod::kDp, v.mask_filter,
                   v.method == PropagationMethod::kGapp, LabelStats(num_classes),
                   {}};
    const auto items = enhance_batch(parts, cfg, threads);
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (!items[i].result) {
        throw Error(*items[i].error_code, "scene " + items[i].id + ": " +
                                              items[i].error);
      }
      row.stats.merge(compute_stats(items[i].result->labels, gts[i]));
    }
    if (initial.stats.total_correct() > 0) {
      row.increment = compute_increment(initial.stats, row.stats);
    }
    rows.push_back(std::move(row));
  }

  if (o.json) {
    json list = json::array();
    for (const auto& r : rows) {
      json doc = stats_to_json(r.stats);
      doc["name"] = r.name;
      doc["dp"] = r.dp;
      doc["mf"] = r.mf;
      doc["gapp"] = r.gapp;
      doc["total_increment"] = r.increment ? json(*r.increment) : json(nullptr);
      list.push_back(std::move(doc));
    }
    out << json({{"scenes", parts.size()}, {"rows", std::move(list)}}).dump(2)
        << "\n";
    return kExitOk;
  }

  out << std::left << std::setw(10) << "row" << std::setw(4) << "DP"
      << std::setw(4) << "MF" << std::setw(6) << "GAPP";
  for (std::uint32_t c = 0; c < num_classes; ++c) {
    out << std::right << std::setw(9) << ("c" + std::to_string(c));
  }
  out << std::right << std::setw(11) << "Avg. Acc." << std::setw(12)
      << "Total Inc." << std::setw(10) << "Coverage" << "\n";
  if (parts.empty()) return kExitOk;
  auto mark = [](bool b) { return b ? "x" : "-"; };
  for (const auto& r : rows) {
    out << std::left << std::setw(10) << r.name << std::setw(4) << mark(r.dp)
        << std::setw(4) << mark(r.mf) << std::setw(6) << mark(r.gapp);
    for (std::uint32_t c = 0; c < num_classes; ++c) {
      out << std::right << std::setw(9)
          << percent_or_dash(r.stats.accuracy(static_cast<ClassId>(c)));
    }
    out << std::right << std::setw(11) << fixed2(100.0 * r.stats.avg_accuracy())
        << std::setw(12)
        << (r.increment ? format_increment(*r.increment) : std::string("-"))
        << std::setw(10) << fixed2(100.0 * r.stats.coverage()) << "\n";
  }
  return kExitOk;
}

}  // namespace

unsigned batch_threads() {
  unsigned n = std::max(1U, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("PLE_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && cap > 0) {
      n = std::min(n, static_cast<unsigned>(cap));
    }
  }
  return n;
}

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Densify sparse point-cloud pseudo-labels with 2D masks",
               "plenhance"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  EnhanceOptions enhance;
  auto* sub_enhance = app.add_subcommand("enhance", "Enhance one scene's labels");
  sub_enhance->add_option("--points", enhance.points, "Point file (.plpc)")->required();
  sub_enhance->add_option("--labels", enhance.labels, "Seed label file (.pllb)")->required();
  sub_enhance->add_option("--masks", enhance.masks, "Mask document (JSON)")->required();
  sub_enhance->add_option("--calib", enhance.calib, "Calibration document (JSON)")->required();
  sub_enhance->add_option("--out", enhance.out, "Output label file")->required();
  sub_enhance->add_option("--config", enhance.config, "Config document (JSON)");
  sub_enhance->add_option("--method", enhance.method, "Propagation method")
      ->check(CLI::IsMember({"gapp", "dp"}));
  sub_enhance->add_option("--report", enhance.report, "Write a JSON report here");
  sub_enhance->add_option("--scene-id", enhance.scene_id,
                          "Scene id for the summary (default: points file stem)");

  EvalOptions eval;
  auto* sub_eval = app.add_subcommand("eval", "Score labels against ground truth");
  sub_eval->add_option("--pred", eval.pred, "Predicted label file")->required();
  sub_eval->add_option("--gt", eval.gt, "Ground-truth label file")->required();
  sub_eval->add_option("--before", eval.before,
                       "Labels before enhancement, for the increment");
  sub_eval->add_flag("--json", eval.json, "Emit JSON");

  SynthOptions synth_opts;
  std::uint64_t seed = 0;
  auto* sub_synth = app.add_subcommand("synth", "Generate synthetic scenes");
  sub_synth->add_option("--spec", synth_opts.spec,
                        "Scene spec document (JSON); defaults when omitted");
  sub_synth->add_option("--out-dir", synth_opts.out_dir, "Output directory")->required();
  sub_synth->add_option("--n-scenes", synth_opts.n_scenes, "Number of scenes");
  auto* seed_opt = sub_synth->add_option("--seed", seed, "First rng seed");

  CompareOptions compare;
  auto* sub_compare =
      app.add_subcommand("compare", "Run the DP / DP+MF / MF+GAPP ablation");
  sub_compare->add_option("--scenes", compare.scenes, "Scene manifest")->required();
  sub_compare->add_flag("--gt-available", compare.gt_available,
                        "Manifest scenes carry ground truth")
      ->required();
  sub_compare->add_option("--config", compare.config, "Base config document");
  sub_compare->add_flag("--json", compare.json, "Emit JSON");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*sub_enhance) return cmd_enhance(enhance, out);
    if (*sub_eval) return cmd_eval(eval, out);
    if (*sub_synth) {
      if (*seed_opt) synth_opts.seed = seed;
      return cmd_synth(synth_opts, out);
    }
    if (*sub_compare) return cmd_compare(compare, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitDataError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitDataError;
  }
  return kExitUsage;
}

}  // namespace plenhance::cli
