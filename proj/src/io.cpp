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

#include "plenhance/io.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

#include "plenhance/error.hpp"

namespace plenhance::io {

namespace {

using nlohmann::json;

constexpr std::string_view kPointsMagic = "PLPC";
constexpr std::string_view kLabelsMagic = "PLLB";

template <typename T>
void put_le(std::string& out, T value) {
  using U = std::make_unsigned_t<T>;
  auto bits = static_cast<U>(value);
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    out.push_back(static_cast<char>(bits & 0xFFU));
    bits = static_cast<U>(bits >> 8);
  }
}

class Reader {
 public:
  explicit Reader(std::string_view bytes) : bytes_(bytes) {}

  template <typename T>
  T get() {
    need(sizeof(T));
    using U = std::make_unsigned_t<T>;
    U bits = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      bits = static_cast<U>(
          bits | static_cast<U>(static_cast<U>(
                     static_cast<unsigned char>(bytes_[pos_ + i]))
                 << (8 * i)));
    }
    pos_ += sizeof(T);
    return static_cast<T>(bits);
  }

  float get_f32() { return std::bit_cast<float>(get<std::uint32_t>()); }

  std::string_view take(std::size_t n) {
    need(n);
    auto s = bytes_.substr(pos_, n);
    pos_ += n;
    return s;
  }

  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  void need(std::size_t n) const {
    if (bytes_.size() - pos_ < n) {
      throw Error(ErrorCode::kTruncatedFile,
                  "need " + std::to_string(n) + " bytes at offset " +
                      std::to_string(pos_) + ", file has " +
                      std::to_string(bytes_.size()));
    }
  }

  std::string_view bytes_;
  std::size_t pos_ = 0;
};

void check_magic(Reader& r, std::string_view magic) {
  if (r.remaining() < magic.size()) {
    throw Error(ErrorCode::kTruncatedFile, "file shorter than its magic bytes");
  }
  if (r.take(magic.size()) != magic) {
    throw Error(ErrorCode::kBadMagic,
                "expected magic \"" + std::string(magic) + "\"");
  }
  const auto version = r.get<std::uint32_t>();
  if (version != kFormatVersion) {
    throw Error(ErrorCode::kBadVersion,
                "unsupported version " + std::to_string(version));
  }
}

void check_payload(const Reader& r, std::uint64_t count, std::size_t item_size) {
  if (count > r.remaining() / item_size) {
    throw Error(ErrorCode::kTruncatedFile,
                "header declares " + std::to_string(count) + " entries but " +
                    std::to_string(r.remaining()) + " payload bytes remain");
  }
  if (count * item_size != r.remaining()) {
    throw Error(ErrorCode::kParse, "trailing bytes after the payload");
  }
}

const json& field(const json& doc, const char* key) {
  if (!doc.is_object()) throw Error(ErrorCode::kParse, "expected an object");
  auto it = doc.find(key);
  if (it == doc.end()) {
    throw Error(ErrorCode::kParse, std::string("missing field \"") + key + "\"");
  }
  return *it;
}

std::uint64_t as_u64(const json& v, const char* what) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0) {
    return static_cast<std::uint64_t>(v.get<std::int64_t>());
  }
  throw Error(ErrorCode::kParse,
              std::string(what) + " must be a non-negative integer");
}

std::uint32_t image_dim(const json& doc, const char* key) {
  const auto v = as_u64(field(doc, key), key);
  if (v == 0 || v > std::numeric_limits<std::uint32_t>::max()) {
    throw Error(ErrorCode::kBadShape,
                std::string(key) + " = " + std::to_string(v) + " is invalid");
  }
  return static_cast<std::uint32_t>(v);
}

// Accepts a JSON number or a string such as "nan" / "inf" so that
// non-finite calibration entries are reported as NonFinite.
double as_real(const json& v) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    char* end = nullptr;
    const double d = std::strtod(s.c_str(), &end);
    if (end != s.c_str() && *end == '\0') return d;
  }
  throw Error(ErrorCode::kBadShape, "projection entries must be numbers");
}

std::string error_prefix(const fs::path& path) { return path.string() + ": "; }

template <typename Fn>
auto with_path(const fs::path& path, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Error& e) {
    throw Error(e.code(), error_prefix(path) + e.detail());
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, error_prefix(path) + e.what());
  }
}

}  // namespace

std::string encode_points(const PointCloud& cloud) {
  std::string out(kPointsMagic);
  put_le<std::uint32_t>(out, kFormatVersion);
  put_le<std::uint64_t>(out, cloud.size());
  out.reserve(out.size() + cloud.size() * 12);
  for (const auto& p : cloud.points()) {
    put_le(out, std::bit_cast<std::uint32_t>(p.x));
    put_le(out, std::bit_cast<std::uint32_t>(p.y));
    put_le(out, std::bit_cast<std::uint32_t>(p.z));
  }
  return out;
}

PointCloud decode_points(std::string_view bytes) {
  Reader r(bytes);
  check_magic(r, kPointsMagic);
  const auto count = r.get<std::uint64_t>();
  check_payload(r, count, 12);
  std::vector<Point3f> pts(static_cast<std::size_t>(count));
  for (auto& p : pts) {
    p.x = r.get_f32();
    p.y = r.get_f32();
    p.z = r.get_f32();
  }
  return PointCloud(std::move(pts));
}

std::string encode_labels(const LabelVector& labels) {
  std::string out(kLabelsMagic);
  put_le<std::uint32_t>(out, kFormatVersion);
  put_le<std::uint32_t>(out, labels.num_classes());
  put_le<std::uint64_t>(out, labels.size());
  out.reserve(out.size() + labels.size() * 4);
  for (ClassId c : labels.values()) put_le<std::int32_t>(out, c);
  return out;
}

LabelVector decode_labels(std::string_view bytes) {
  Reader r(bytes);
  check_magic(r, kLabelsMagic);
  const auto num_classes = r.get<std::uint32_t>();
  const auto count = r.get<std::uint64_t>();
  check_payload(r, count, 4);
  std::vector<ClassId> values(static_cast<std::size_t>(count));
  for (auto& v : values) v = r.get<std::int32_t>();
  return LabelVector(std::move(values), num_classes);
}

std::vector<std::uint64_t> rle_encode(const Mask& mask) {
  std::vector<std::uint64_t> runs;
  std::uint8_t current = 0;
  std::uint64_t run = 0;
  for (std::uint8_t px : mask.bitmap()) {
    if (px != current) {
      runs.push_back(run);
      run = 0;
      current = px;
    }
    ++run;
  }
  runs.push_back(run);
  return runs;
}

Mask rle_decode(std::int64_t id, std::uint32_t height, std::uint32_t width,
                const std::vector<std::uint64_t>& runs, std::uint64_t area) {
  const std::uint64_t total = static_cast<std::uint64_t>(height) * width;
  std::uint64_t sum = 0;
  for (auto run : runs) {
    if (run > total - sum) {
      throw Error(ErrorCode::kRleSumMismatch,
                  "mask " + std::to_string(id) + " runs exceed " +
                      std::to_string(total) + " pixels");
    }
    sum += run;
  }
  if (sum != total) {
    throw Error(ErrorCode::kRleSumMismatch,
                "mask " + std::to_string(id) + " runs sum to " +
                    std::to_string(sum) + ", image has " +
                    std::to_string(total) + " pixels");
  }
  std::vector<std::uint8_t> bitmap(static_cast<std::size_t>(total), 0);
  std::size_t pos = 0;
  bool value = false;
  for (auto run : runs) {
    if (value) {
      std::fill_n(bitmap.begin() + static_cast<std::ptrdiff_t>(pos),
                  static_cast<std::size_t>(run), std::uint8_t{1});
    }
    pos += static_cast<std::size_t>(run);
    value = !value;
  }
  return Mask(id, height, width, std::move(bitmap), area);
}

nlohmann::json masks_to_json(const MaskSet& masks) {
  json list = json::array();
  for (const auto& m : masks.masks()) {
    list.push_back({{"id", m.id()}, {"area", m.area()}, {"rle", rle_encode(m)}});
  }
  return {{"image_height", masks.image_height()},
          {"image_width", masks.image_width()},
          {"masks", std::move(list)}};
}

MaskSet masks_from_json(const nlohmann::json& doc) {
  const std::uint32_t height = image_dim(doc, "image_height");
  const std::uint32_t width = image_dim(doc, "image_width");
  const json& list = field(doc, "masks");
  if (!list.is_array()) throw Error(ErrorCode::kParse, "masks must be an array");
  std::vector<Mask> masks;
  masks.reserve(list.size());
  for (const auto& entry : list) {
    const json& id_field = field(entry, "id");
    if (!id_field.is_number_integer()) {
      throw Error(ErrorCode::kParse, "mask id must be an integer");
    }
    const auto id = id_field.get<std::int64_t>();
    const auto area = as_u64(field(entry, "area"), "area");
    const json& rle = field(entry, "rle");
    if (!rle.is_array()) throw Error(ErrorCode::kParse, "rle must be an array");
    std::vector<std::uint64_t> runs;
    runs.reserve(rle.size());
    for (const auto& run : rle) runs.push_back(as_u64(run, "rle run"));
    masks.push_back(rle_decode(id, height, width, runs, area));
  }
  return MaskSet(std::move(masks), height, width);
}

nlohmann::json calibration_to_json(const CameraModel& camera) {
  return {{"P", camera.projection()},
          {"image_height", camera.image_height()},
          {"image_width", camera.image_width()}};
}

CameraModel calibration_from_json(const nlohmann::json& doc) {
  const json& p = field(doc, "P");
  if (!p.is_array() || p.size() != 12) {
    throw Error(ErrorCode::kBadShape,
                "P must hold 12 values (3x4 row-major), got " +
                    std::to_string(p.is_array() ? p.size() : 0));
  }
  std::array<double, 12> values{};
  for (std::size_t i = 0; i < 12; ++i) values[i] = as_real(p[i]);
  return CameraModel(values, image_dim(doc, "image_height"),
                     image_dim(doc, "image_width"));
}

EnhancementConfig config_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) {
    throw Error(ErrorCode::kParse, "config must be an object");
  }
  EnhancementConfig cfg;
  auto real = [](const json& v, const std::string& key) {
    if (!v.is_number()) {
      throw Error(ErrorCode::kOutOfRange, key + " must be a number");
    }
    return v.get<double>();
  };
  auto text = [](const json& v, const std::string& key) {
    if (!v.is_string()) {
      throw Error(ErrorCode::kOutOfRange, key + " must be a string");
    }
    return v.get<std::string>();
  };
  auto bad_choice = [](const std::string& key, const std::string& value) {
    return Error(ErrorCode::kOutOfRange,
                 key + " has no option \"" + value + "\"");
  };

  for (const auto& [key, value] : doc.items()) {
    if (key == "lambda_s") {
      cfg.lambda_s = real(value, key);
    } else if (key == "lambda_p") {
      cfg.lambda_p = real(value, key);
    } else if (key == "lambda_r") {
      cfg.lambda_r = real(value, key);
    } else if (key == "beta") {
      cfg.beta = real(value, key);
    } else if (key == "fixed_radius") {
      cfg.fixed_radius = real(value, key);
    } else if (key == "mask_order") {
      const auto s = text(value, key);
      if (s == "area_ascending") {
        cfg.mask_order = MaskOrder::kAreaAscending;
      } else if (s == "area_descending") {
        cfg.mask_order = MaskOrder::kAreaDescending;
      } else {
        throw bad_choice(key, s);
      }
    } else if (key == "tie_break") {
      const auto s = text(value, key);
      if (s != "lowest_class_id") throw bad_choice(key, s);
      cfg.tie_break = TieBreak::kLowestClassId;
    } else if (key == "single_seed_policy") {
      const auto s = text(value, key);
      if (s == "skip") {
        cfg.single_seed_policy = SingleSeedPolicy::kSkip;
      } else if (s == "fixed_radius") {
        cfg.single_seed_policy = SingleSeedPolicy::kFixedRadius;
      } else {
        throw bad_choice(key, s);
      }
    } else if (key == "method") {
      const auto s = text(value, key);
      if (s == "gapp") {
        cfg.method = PropagationMethod::kGapp;
      } else if (s == "dp") {
        cfg.method = PropagationMethod::kDp;
      } else {
        throw bad_choice(key, s);
      }
    } else if (key == "mask_filter") {
      if (!value.is_boolean()) {
        throw Error(ErrorCode::kOutOfRange, "mask_filter must be a boolean");
      }
      cfg.mask_filter = value.get<bool>();
    } else {
      throw Error(ErrorCode::kUnknownField, "unknown config field \"" + key + "\"");
    }
  }
  cfg.validate();
  return cfg;
}

nlohmann::json config_to_json(const EnhancementConfig& config) {
  json doc = {{"lambda_s", config.lambda_s},
              {"lambda_p", config.lambda_p},
              {"lambda_r", config.lambda_r},
              {"beta", config.beta},
              {"mask_order", to_string(config.mask_order)},
              {"tie_break", "lowest_class_id"},
              {"single_seed_policy", to_string(config.single_seed_policy)},
              {"method", to_string(config.method)},
              {"mask_filter", config.mask_filter}};
  if (config.single_seed_policy == SingleSeedPolicy::kFixedRadius) {
    doc["fixed_radius"] = config.fixed_radius;
  }
  return doc;
}

nlohmann::json report_to_json(const EnhancementReport& report) {
  json masks = json::array();
  for (const auto& r : report.masks) {
    json m = {{"id", r.mask_id},
              {"area", r.area},
              {"decision", r.assigned() ? "assigned" : "ignore"},
              {"points", r.points},
              {"seeds", r.seeds},
              {"unlabeled", r.unlabeled},
              {"newly_labeled", r.newly_labeled},
              {"rounds", r.rounds}};
    if (r.label) {
      m["class"] = *r.label;
    } else {
      m["failed"] = r.failed;
    }
    masks.push_back(std::move(m));
  }
  return {{"scene_id", report.scene_id},
          {"config", config_to_json(report.config)},
          {"labels_before", report.labels_before},
          {"labels_after", report.labels_after},
          {"masks_assigned", report.masks_assigned()},
          {"masks_ignored", report.masks_ignored()},
          {"masks", std::move(masks)}};
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kIo, error_prefix(path) + "cannot open for reading");
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::kIo, error_prefix(path) + "read failed");
  return std::move(ss).str();
}

void write_file(const fs::path& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(ErrorCode::kIo, error_prefix(path) + "cannot open for writing");
  }
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIo, error_prefix(path) + "write failed");
}

nlohmann::json read_json(const fs::path& path) {
  const std::string text = read_file(path);
  return with_path(path, [&] { return json::parse(text); });
}

void write_json(const fs::path& path, const nlohmann::json& doc) {
  write_file(path, doc.dump() + "\n");
}

PointCloud read_points(const fs::path& path) {
  const std::string bytes = read_file(path);
  return with_path(path, [&] { return decode_points(bytes); });
}

void write_points(const fs::path& path, const PointCloud& cloud) {
  write_file(path, encode_points(cloud));
}

LabelVector read_labels(const fs::path& path) {
  const std::string bytes = read_file(path);
  return with_path(path, [&] { return decode_labels(bytes); });
}

void write_labels(const fs::path& path, const LabelVector& labels) {
  write_file(path, encode_labels(labels));
}

MaskSet read_masks(const fs::path& path) {
  const json doc = read_json(path);
  return with_path(path, [&] { return masks_from_json(doc); });
}

void write_masks(const fs::path& path, const MaskSet& masks) {
  write_json(path, masks_to_json(masks));
}

CameraModel read_calibration(const fs::path& path) {
  const json doc = read_json(path);
  return with_path(path, [&] { return calibration_from_json(doc); });
}

void write_calibration(const fs::path& path, const CameraModel& camera) {
  write_json(path, calibration_to_json(camera));
}

EnhancementConfig read_config(const fs::path& path) {
  const json doc = read_json(path);
  return with_path(path, [&] { return config_from_json(doc); });
}

std::vector<SceneManifest> read_manifest(const fs::path& path) {
  const json doc = read_json(path);
  return with_path(path, [&] {
    const json& list = field(doc, "scenes");
    if (!list.is_array()) {
      throw Error(ErrorCode::kParse, "scenes must be an array");
    }
    std::vector<SceneManifest> scenes;
    for (const auto& e : list) {
      SceneManifest m;
      m.id = field(e, "id").get<std::string>();
      m.points = field(e, "points").get<std::string>();
      m.labels = field(e, "labels").get<std::string>();
      m.masks = field(e, "masks").get<std::string>();
      m.calib = field(e, "calib").get<std::string>();
      if (auto it = e.find("gt"); it != e.end() && !it->is_null()) {
        m.gt = it->get<std::string>();
      }
      scenes.push_back(std::move(m));
    }
    return scenes;
  });
}

void write_manifest(const fs::path& path,
                    const std::vector<SceneManifest>& scenes) {
  json list = json::array();
  for (const auto& s : scenes) {
    json e = {{"id", s.id},
              {"points", s.points.generic_string()},
              {"labels", s.labels.generic_string()},
              {"masks", s.masks.generic_string()},
              {"calib", s.calib.generic_string()}};
    if (s.gt) e["gt"] = s.gt->generic_string();
    list.push_back(std::move(e));
  }
  write_file(path, json({{"scenes", std::move(list)}}).dump(2) + "\n");
}

LoadedScene load_scene(const SceneManifest& entry, const fs::path& base_dir) {
  auto resolve = [&](const fs::path& p) {
    return p.is_absolute() ? p : base_dir / p;
  };
  LoadedScene scene;
  scene.parts.id = entry.id;
  scene.parts.cloud = read_points(resolve(entry.points));
  scene.parts.labels = read_labels(resolve(entry.labels));
  scene.parts.masks = read_masks(resolve(entry.masks));
  scene.parts.camera = read_calibration(resolve(entry.calib));
  if (entry.gt) {
    const fs::path gt_path = resolve(*entry.gt);
    scene.gt = read_labels(gt_path);
    if (scene.gt->size() != scene.parts.cloud.size()) {
      throw Error(ErrorCode::kDimensionMismatch,
                  error_prefix(gt_path) + "ground truth has " +
                      std::to_string(scene.gt->size()) + " labels for " +
                      std::to_string(scene.parts.cloud.size()) + " points");
    }
  }
  return scene;
}

}  // namespace plenhance::io
