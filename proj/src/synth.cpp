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

#include "plenhance/synth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include "plenhance/error.hpp"
#include "plenhance/projection.hpp"

namespace plenhance::synth {

namespace {

using Vec3 = std::array<double, 3>;
using nlohmann::json;

// Relative slack on the segment parameter when deciding whether a hit lies
// strictly before a surface point (float storage moves points by ~1e-7).
constexpr double kSegmentSlack = 1e-5;

// Fixed conversion of raw 64-bit draws so the stream is identical across
// standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::size_t index(std::size_t n) {
    return std::min(n - 1, static_cast<std::size_t>(uniform() * static_cast<double>(n)));
  }

 private:
  std::mt19937_64 engine_;
};

Vec3 sub(const Vec3& a, const Vec3& b) {
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}

Vec3 to_vec(const Point3f& p) { return {p.x, p.y, p.z}; }

Point3f to_point(const Vec3& v) {
  return {static_cast<float>(v[0]), static_cast<float>(v[1]),
          static_cast<float>(v[2])};
}

void infeasible(const std::string& what) {
  throw Error(ErrorCode::kInfeasibleSpec, what);
}

double footprint_half_x(const ObjectTemplate& t) {
  return t.shape == Shape::kBox ? t.size[0] / 2.0 : t.size[0];
}

double footprint_half_z(const ObjectTemplate& t) {
  return t.shape == Shape::kBox ? t.size[2] / 2.0 : t.size[0];
}

}  // namespace

// ---------------------------------------------------------------------------
// Spec

std::vector<ObjectTemplate> default_templates() {
  return {
      {"car", 2, Shape::kBox, {1.8, 1.5, 4.2}},
      {"truck", 3, Shape::kBox, {2.5, 3.2, 8.0}},
      {"person", 4, Shape::kCylinder, {0.35, 1.75, 0.0}},
      {"bike", 5, Shape::kBox, {0.6, 1.2, 1.8}},
  };
}

SceneSpec default_spec() {
  SceneSpec spec;
  spec.templates = default_templates();
  return spec;
}

double SceneSpec::seed_fraction_for(ClassId c) const {
  if (seed_fraction.empty()) return 0.15;
  return seed_fraction[static_cast<std::size_t>(c)];
}

void SceneSpec::validate() const {
  if (image_width == 0 || image_height == 0) infeasible("image size is zero");
  if (!(focal_length > 0.0)) infeasible("focal_length must be positive");
  if (!(ground_height > 0.0)) infeasible("ground_height must be positive");
  if (!(object_depth_min > 0.0 && object_depth_max >= object_depth_min)) {
    infeasible("object depth range is empty");
  }
  if (!(wall_distance > object_depth_max)) {
    infeasible("wall_distance must lie beyond object_depth_max");
  }
  if (camera_offset[1] >= ground_height) infeasible("camera is below ground");
  if (std::abs(camera_offset[2]) >= object_depth_min) {
    infeasible("camera offset reaches the object range");
  }
  if (points_per_object == 0 && ground_points == 0 && wall_points == 0) {
    infeasible("spec produces zero points");
  }
  if (n_objects > 0 && templates.empty()) infeasible("no object templates");
  if (num_classes < 2) infeasible("need at least two classes");
  auto check_class = [&](ClassId c, const std::string& what) {
    if (c < 0 || static_cast<std::uint32_t>(c) >= num_classes) {
      infeasible(what + " class " + std::to_string(c) + " is out of range");
    }
  };
  check_class(ground_class, "ground");
  check_class(background_class, "background");
  for (const auto& t : templates) {
    check_class(t.label, "template " + t.name);
    const bool box = t.shape == Shape::kBox;
    if (!(t.size[0] > 0.0 && t.size[1] > 0.0 && (!box || t.size[2] > 0.0))) {
      infeasible("template " + t.name + " has a non-positive extent");
    }
  }
  if (!seed_fraction.empty() && seed_fraction.size() != num_classes) {
    infeasible("seed_fraction needs one entry per class");
  }
  for (double f : seed_fraction) {
    if (!(f >= 0.0 && f <= 1.0)) infeasible("seed fraction outside [0, 1]");
  }
  if (!(noise_rate >= 0.0 && noise_rate <= 1.0)) {
    infeasible("noise_rate outside [0, 1]");
  }
}

json spec_to_json(const SceneSpec& spec) {
  json templates = json::array();
  for (const auto& t : spec.templates) {
    templates.push_back({{"name", t.name},
                         {"class", t.label},
                         {"shape", t.shape == Shape::kBox ? "box" : "cylinder"},
                         {"size", t.size}});
  }
  return {{"rng_seed", spec.rng_seed},
          {"n_objects", spec.n_objects},
          {"templates", templates},
          {"num_classes", spec.num_classes},
          {"ground_class", spec.ground_class},
          {"background_class", spec.background_class},
          {"image_width", spec.image_width},
          {"image_height", spec.image_height},
          {"focal_length", spec.focal_length},
          {"ground_height", spec.ground_height},
          {"wall_distance", spec.wall_distance},
          {"object_depth_min", spec.object_depth_min},
          {"object_depth_max", spec.object_depth_max},
          {"points_per_object", spec.points_per_object},
          {"ground_points", spec.ground_points},
          {"wall_points", spec.wall_points},
          {"camera_offset", spec.camera_offset},
          {"seed_fraction", spec.seed_fraction},
          {"noise_rate", spec.noise_rate},
          {"n_merged_masks", spec.n_merged_masks},
          {"n_region_masks", spec.n_region_masks}};
}

SceneSpec spec_from_json(const json& doc) {
  if (!doc.is_object()) infeasible("scene spec must be an object");
  SceneSpec spec = default_spec();
  try {
    for (const auto& [key, v] : doc.items()) {
      if (key == "rng_seed") {
        spec.rng_seed = v.get<std::uint64_t>();
      } else if (key == "n_objects") {
        spec.n_objects = v.get<std::uint32_t>();
      } else if (key == "templates") {
        spec.templates.clear();
        for (const auto& t : v) {
          ObjectTemplate tmpl;
          tmpl.name = t.at("name").get<std::string>();
          tmpl.label = t.at("class").get<ClassId>();
          const auto shape = t.at("shape").get<std::string>();
          if (shape != "box" && shape != "cylinder") {
            infeasible("unknown shape \"" + shape + "\"");
          }
          tmpl.shape = shape == "box" ? Shape::kBox : Shape::kCylinder;
          const auto size = t.at("size").get<std::vector<double>>();
          if (size.size() < 2 || size.size() > 3) {
            infeasible("template size needs 2 or 3 values");
          }
          std::copy(size.begin(), size.end(), tmpl.size.begin());
          spec.templates.push_back(std::move(tmpl));
        }
      } else if (key == "num_classes") {
        spec.num_classes = v.get<std::uint32_t>();
      } else if (key == "ground_class") {
        spec.ground_class = v.get<ClassId>();
      } else if (key == "background_class") {
        spec.background_class = v.get<ClassId>();
      } else if (key == "image_width") {
        spec.image_width = v.get<std::uint32_t>();
      } else if (key == "image_height") {
        spec.image_height = v.get<std::uint32_t>();
      } else if (key == "focal_length") {
        spec.focal_length = v.get<double>();
      } else if (key == "ground_height") {
        spec.ground_height = v.get<double>();
      } else if (key == "wall_distance") {
        spec.wall_distance = v.get<double>();
      } else if (key == "object_depth_min") {
        spec.object_depth_min = v.get<double>();
      } else if (key == "object_depth_max") {
        spec.object_depth_max = v.get<double>();
      } else if (key == "points_per_object") {
        spec.points_per_object = v.get<std::uint32_t>();
      } else if (key == "ground_points") {
        spec.ground_points = v.get<std::uint32_t>();
      } else if (key == "wall_points") {
        spec.wall_points = v.get<std::uint32_t>();
      } else if (key == "camera_offset") {
        spec.camera_offset = v.get<std::array<double, 3>>();
      } else if (key == "seed_fraction") {
        if (v.is_number()) {
          spec.seed_fraction.assign(spec.num_classes, v.get<double>());
        } else {
          spec.seed_fraction = v.get<std::vector<double>>();
        }
      } else if (key == "noise_rate") {
        spec.noise_rate = v.get<double>();
      } else if (key == "n_merged_masks") {
        spec.n_merged_masks = v.get<std::uint32_t>();
      } else if (key == "n_region_masks") {
        spec.n_region_masks = v.get<std::uint32_t>();
      } else {
        throw Error(ErrorCode::kUnknownField,
                    "unknown scene spec field \"" + key + "\"");
      }
    }
  } catch (const json::exception& e) {
    infeasible(std::string("bad scene spec value: ") + e.what());
  }
  // A scalar seed_fraction given before num_classes must follow it.
  if (doc.contains("seed_fraction") && doc["seed_fraction"].is_number()) {
    spec.seed_fraction.assign(spec.num_classes,
                              doc["seed_fraction"].get<double>());
  }
  spec.validate();
  return spec;
}

// ---------------------------------------------------------------------------
// Geometry

std::optional<double> Object::intersect(const Vec3& origin, const Vec3& dir,
                                        double min_t) const {
  std::optional<double> best;
  auto consider = [&](double t) {
    if (t > min_t && (!best || t < *best)) best = t;
  };

  const double y_top = -kind.size[1];
  const double y_bottom = 0.0;

  if (kind.shape == Shape::kBox) {
    const double lo[3] = {center_x - kind.size[0] / 2.0, y_top,
                          center_z - kind.size[2] / 2.0};
    const double hi[3] = {center_x + kind.size[0] / 2.0, y_bottom,
                          center_z + kind.size[2] / 2.0};
    double t_near = -std::numeric_limits<double>::infinity();
    double t_far = std::numeric_limits<double>::infinity();
    for (int a = 0; a < 3; ++a) {
      if (dir[a] == 0.0) {
        if (origin[a] < lo[a] || origin[a] > hi[a]) return std::nullopt;
        continue;
      }
      double t0 = (lo[a] - origin[a]) / dir[a];
      double t1 = (hi[a] - origin[a]) / dir[a];
      if (t0 > t1) std::swap(t0, t1);
      t_near = std::max(t_near, t0);
      t_far = std::min(t_far, t1);
    }
    if (t_near > t_far) return std::nullopt;
    consider(t_near);
    consider(t_far);
    return best;
  }

  // Vertical cylinder.
  const double r = kind.size[0];
  const double ox = origin[0] - center_x;
  const double oz = origin[2] - center_z;
  const double a = dir[0] * dir[0] + dir[2] * dir[2];
  if (a > 0.0) {
    const double b = 2.0 * (dir[0] * ox + dir[2] * oz);
    const double c = ox * ox + oz * oz - r * r;
    const double disc = b * b - 4.0 * a * c;
    if (disc >= 0.0) {
      const double sq = std::sqrt(disc);
      for (double t : {(-b - sq) / (2.0 * a), (-b + sq) / (2.0 * a)}) {
        const double y = origin[1] + t * dir[1];
        if (y >= y_top && y <= y_bottom) consider(t);
      }
    }
  }
  if (dir[1] != 0.0) {
    for (double yc : {y_top, y_bottom}) {
      const double t = (yc - origin[1]) / dir[1];
      const double x = ox + t * dir[0];
      const double z = oz + t * dir[2];
      if (x * x + z * z <= r * r) consider(t);
    }
  }
  return best;
}

CameraModel SceneGeometry::camera() const {
  const double f = focal_length;
  const double cx = image_width / 2.0;
  const double cy = image_height / 2.0;
  const auto& c = camera_center;
  return CameraModel({f, 0.0, cx, -(f * c[0] + cx * c[2]),  //
                      0.0, f, cy, -(f * c[1] + cy * c[2]),  //
                      0.0, 0.0, 1.0, -c[2]},
                     image_height, image_width);
}

namespace {

// Objects are modelled with their base at y = 0; shift rays into that frame.
Vec3 object_frame(const Vec3& p, double ground_height) {
  return {p[0], p[1] - ground_height, p[2]};
}

struct Hit {
  double t = std::numeric_limits<double>::infinity();
  std::int32_t surface = kSurfaceWall;
};

Hit first_hit(const SceneGeometry& geo, const Vec3& origin, const Vec3& dir) {
  Hit hit;
  const Vec3 o = object_frame(origin, geo.ground_height);
  for (std::size_t i = 0; i < geo.objects.size(); ++i) {
    if (auto t = geo.objects[i].intersect(o, dir, 0.0); t && *t < hit.t) {
      hit = {*t, static_cast<std::int32_t>(i)};
    }
  }
  if (dir[1] > 0.0) {
    const double t = (geo.ground_height - origin[1]) / dir[1];
    if (t > 0.0 && t < hit.t) hit = {t, kSurfaceGround};
  }
  if (dir[2] > 0.0) {
    const double t = (geo.wall_distance - origin[2]) / dir[2];
    if (t > 0.0 && t < hit.t) hit = {t, kSurfaceWall};
  }
  return hit;
}

}  // namespace

bool SceneGeometry::occluded(const Vec3& from, const Vec3& to) const {
  const Vec3 dir = sub(to, from);
  const Vec3 o = object_frame(from, ground_height);
  for (const auto& obj : objects) {
    auto t = obj.intersect(o, dir, 0.0);
    if (t && *t < 1.0 - kSegmentSlack) return true;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Scene assembly

namespace {

std::vector<std::int32_t> render_surfaces(const SceneGeometry& geo) {
  const std::uint32_t w = geo.image_width;
  const std::uint32_t h = geo.image_height;
  const double cx = w / 2.0;
  const double cy = h / 2.0;
  std::vector<std::int32_t> surfaces(static_cast<std::size_t>(w) * h);
  for (std::uint32_t v = 0; v < h; ++v) {
    for (std::uint32_t u = 0; u < w; ++u) {
      const Vec3 dir = {(u + 0.5 - cx) / geo.focal_length,
                        (v + 0.5 - cy) / geo.focal_length, 1.0};
      surfaces[static_cast<std::size_t>(v) * w + u] =
          first_hit(geo, geo.camera_center, dir).surface;
    }
  }
  return surfaces;
}

constexpr std::int32_t kNoPoint = std::numeric_limits<std::int32_t>::min();
constexpr std::int32_t kMixed = std::numeric_limits<std::int32_t>::min() + 1;

struct PixelBox {
  std::uint32_t u0 = std::numeric_limits<std::uint32_t>::max();
  std::uint32_t v0 = std::numeric_limits<std::uint32_t>::max();
  std::uint32_t u1 = 0;
  std::uint32_t v1 = 0;
  bool empty() const { return u0 > u1; }
  void add(std::uint32_t u, std::uint32_t v) {
    u0 = std::min(u0, u);
    v0 = std::min(v0, v);
    u1 = std::max(u1, u);
    v1 = std::max(v1, v);
  }
};

double box_gap(const PixelBox& a, const PixelBox& b) {
  const double gu = std::max(0.0, std::max(static_cast<double>(a.u0) - b.u1,
                                           static_cast<double>(b.u0) - a.u1));
  const double gv = std::max(0.0, std::max(static_cast<double>(a.v0) - b.v1,
                                           static_cast<double>(b.v0) - a.v1));
  return std::hypot(gu, gv);
}

ClassId surface_class(const SceneGeometry& geo, const SceneSpec& spec,
                      std::int32_t surface) {
  if (surface == kSurfaceGround) return spec.ground_class;
  if (surface == kSurfaceWall) return spec.background_class;
  return geo.objects[static_cast<std::size_t>(surface)].kind.label;
}

}  // namespace

SyntheticScene assemble_scene(const SceneGeometry& geometry,
                              std::vector<Point3f> points,
                              std::vector<std::int32_t> surface,
                              const SceneSpec& spec) {
  if (points.size() != surface.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "surface ids do not match the point count");
  }
  if (points.empty()) infeasible("scene has zero points");

  SyntheticScene scene;
  scene.geometry = geometry;
  scene.camera = geometry.camera();
  const std::uint32_t w = geometry.image_width;
  const std::uint32_t h = geometry.image_height;

  std::vector<ClassId> gt(points.size());
  scene.camera_visible.resize(points.size());
  for (std::size_t k = 0; k < points.size(); ++k) {
    gt[k] = surface_class(geometry, spec, surface[k]);
    scene.camera_visible[k] =
        geometry.occluded(geometry.camera_center, to_vec(points[k])) ? 0 : 1;
  }

  // Which surface the camera-visible points show in each pixel.
  std::vector<std::int32_t> visible_surface(static_cast<std::size_t>(w) * h,
                                            kNoPoint);
  for (std::size_t k = 0; k < points.size(); ++k) {
    if (!scene.camera_visible[k]) continue;
    auto px = project_point(points[k], scene.camera);
    if (!px) continue;
    auto& cell = visible_surface[static_cast<std::size_t>(px->v) * w + px->u];
    if (cell == kNoPoint) {
      cell = surface[k];
    } else if (cell != surface[k]) {
      cell = kMixed;
    }
  }

  const std::vector<std::int32_t> rendered = render_surfaces(geometry);
  auto footprint = [&](std::int32_t s) {
    std::vector<std::uint8_t> bitmap(rendered.size(), 0);
    for (std::size_t i = 0; i < rendered.size(); ++i) {
      const std::int32_t vis = visible_surface[i];
      if (rendered[i] == s && (vis == kNoPoint || vis == s)) bitmap[i] = 1;
    }
    return bitmap;
  };

  std::vector<Mask> masks;
  std::int64_t next_id = 0;
  auto add_mask = [&](std::vector<std::uint8_t> bitmap, MaskOrigin origin) {
    Mask m = Mask::from_bitmap(next_id, h, w, std::move(bitmap));
    if (m.area() == 0) return false;
    ++next_id;
    masks.push_back(std::move(m));
    scene.mask_origins.push_back(origin);
    return true;
  };

  std::vector<std::vector<std::uint8_t>> object_bitmaps;
  std::vector<PixelBox> boxes;
  std::vector<std::int32_t> object_of_bitmap;
  for (std::size_t i = 0; i < geometry.objects.size(); ++i) {
    auto bitmap = footprint(static_cast<std::int32_t>(i));
    PixelBox box;
    for (std::uint32_t v = 0; v < h; ++v) {
      for (std::uint32_t u = 0; u < w; ++u) {
        if (bitmap[static_cast<std::size_t>(v) * w + u]) box.add(u, v);
      }
    }
    if (box.empty()) continue;
    add_mask(bitmap, {MaskKind::kObject, static_cast<std::int32_t>(i),
                      geometry.objects[i].kind.label});
    object_bitmaps.push_back(std::move(bitmap));
    boxes.push_back(box);
    object_of_bitmap.push_back(static_cast<std::int32_t>(i));
  }

  // Merged masks: the closest pairs of objects of different classes.
  struct Pair {
    double gap;
    std::size_t a;
    std::size_t b;
  };
  std::vector<Pair> pairs;
  for (std::size_t a = 0; a < object_bitmaps.size(); ++a) {
    for (std::size_t b = a + 1; b < object_bitmaps.size(); ++b) {
      const auto la = geometry.objects[static_cast<std::size_t>(object_of_bitmap[a])].kind.label;
      const auto lb = geometry.objects[static_cast<std::size_t>(object_of_bitmap[b])].kind.label;
      if (la == lb) continue;
      pairs.push_back({box_gap(boxes[a], boxes[b]), a, b});
    }
  }
  std::sort(pairs.begin(), pairs.end(), [](const Pair& x, const Pair& y) {
    return std::tie(x.gap, x.a, x.b) < std::tie(y.gap, y.a, y.b);
  });
  for (std::size_t n = 0; n < std::min<std::size_t>(spec.n_merged_masks, pairs.size()); ++n) {
    std::vector<std::uint8_t> bitmap = object_bitmaps[pairs[n].a];
    const auto& other = object_bitmaps[pairs[n].b];
    for (std::size_t i = 0; i < bitmap.size(); ++i) bitmap[i] |= other[i];
    add_mask(std::move(bitmap), {MaskKind::kMerged, -1, kIgnore});
  }

  // Coarse elliptic regions spanning several surfaces.
  Rng region_rng(spec.rng_seed ^ 0x9E3779B97F4A7C15ULL);
  for (std::uint32_t n = 0; n < spec.n_region_masks; ++n) {
    const double uc = region_rng.uniform(0.0, w);
    const double vc = region_rng.uniform(0.25 * h, 0.9 * h);
    const double ra = region_rng.uniform(0.12, 0.25) * w;
    const double rb = region_rng.uniform(0.15, 0.35) * h;
    std::vector<std::uint8_t> bitmap(static_cast<std::size_t>(w) * h, 0);
    for (std::uint32_t v = 0; v < h; ++v) {
      for (std::uint32_t u = 0; u < w; ++u) {
        const double du = (u + 0.5 - uc) / ra;
        const double dv = (v + 0.5 - vc) / rb;
        if (du * du + dv * dv <= 1.0) {
          bitmap[static_cast<std::size_t>(v) * w + u] = 1;
        }
      }
    }
    add_mask(std::move(bitmap), {MaskKind::kRegion, -1, kIgnore});
  }

  add_mask(footprint(kSurfaceGround),
           {MaskKind::kGround, -1, spec.ground_class});
  add_mask(footprint(kSurfaceWall),
           {MaskKind::kWall, -1, spec.background_class});

  scene.masks = MaskSet(std::move(masks), h, w);
  scene.gt = LabelVector(gt, spec.num_classes);
  scene.seeds = LabelVector(std::vector<ClassId>(points.size(), kIgnore),
                            spec.num_classes);
  scene.surface = std::move(surface);
  scene.cloud = PointCloud(std::move(points));
  return scene;
}

// ---------------------------------------------------------------------------
// Generation

namespace {

std::vector<Object> place_objects(const SceneSpec& spec, Rng& rng) {
  const auto& templates =
      spec.templates.empty() ? default_templates() : spec.templates;
  const double tan_half = spec.image_width / 2.0 / spec.focal_length;
  constexpr double kMargin = 0.5;
  constexpr int kAttempts = 2000;

  std::vector<Object> objects;
  for (std::uint32_t n = 0; n < spec.n_objects; ++n) {
    const ObjectTemplate& tmpl = templates[rng.index(templates.size())];
    bool placed = false;
    for (int attempt = 0; attempt < kAttempts && !placed; ++attempt) {
      const double z = rng.uniform(spec.object_depth_min, spec.object_depth_max);
      const double x_lim = 0.75 * z * tan_half;
      const double x = rng.uniform(-x_lim, x_lim);
      bool clear = true;
      for (const auto& o : objects) {
        const double gx = std::abs(o.center_x - x) - footprint_half_x(o.kind) -
                          footprint_half_x(tmpl);
        const double gz = std::abs(o.center_z - z) - footprint_half_z(o.kind) -
                          footprint_half_z(tmpl);
        if (gx < kMargin && gz < kMargin) {
          clear = false;
          break;
        }
      }
      // Keep the object clear of both sensors.
      if (z - footprint_half_z(tmpl) <= std::abs(spec.camera_offset[2]) + kMargin) {
        clear = false;
      }
      if (clear) {
        objects.push_back({tmpl, x, z});
        placed = true;
      }
    }
    if (!placed) {
      infeasible("could not place object " + std::to_string(n) +
                 " without overlap");
    }
  }
  return objects;
}

Vec3 sample_on_object(const Object& obj, double ground_height, Rng& rng) {
  const auto& k = obj.kind;
  const double y_base = ground_height;
  if (k.shape == Shape::kBox) {
    const double wx = k.size[0];
    const double hy = k.size[1];
    const double lz = k.size[2];
    // Faces except the bottom: top, +-x sides, +-z sides.
    const double areas[5] = {wx * lz, hy * lz, hy * lz, wx * hy, wx * hy};
    const double total = areas[0] + areas[1] + areas[2] + areas[3] + areas[4];
    double pick = rng.uniform() * total;
    int face = 0;
    while (face < 4 && pick >= areas[face]) pick -= areas[face++];
    const double s = rng.uniform();
    const double t = rng.uniform();
    const double x0 = obj.center_x - wx / 2.0;
    const double z0 = obj.center_z - lz / 2.0;
    const double y0 = y_base - hy;
    switch (face) {
      case 0: return {x0 + s * wx, y0, z0 + t * lz};
      case 1: return {x0, y0 + s * hy, z0 + t * lz};
      case 2: return {x0 + wx, y0 + s * hy, z0 + t * lz};
      case 3: return {x0 + s * wx, y0 + t * hy, z0};
      default: return {x0 + s * wx, y0 + t * hy, z0 + lz};
    }
  }
  const double r = k.size[0];
  const double hy = k.size[1];
  const double lateral = 2.0 * std::numbers::pi * r * hy;
  const double cap = std::numbers::pi * r * r;
  if (rng.uniform() * (lateral + cap) < lateral) {
    const double theta = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const double y = y_base - rng.uniform() * hy;
    return {obj.center_x + r * std::cos(theta), y,
            obj.center_z + r * std::sin(theta)};
  }
  const double rho = r * std::sqrt(rng.uniform());
  const double theta = rng.uniform(0.0, 2.0 * std::numbers::pi);
  return {obj.center_x + rho * std::cos(theta), y_base - hy,
          obj.center_z + rho * std::sin(theta)};
}

}  // namespace

SyntheticScene generate_scene(const SceneSpec& spec_in) {
  SceneSpec spec = spec_in;
  if (spec.templates.empty()) spec.templates = default_templates();
  spec.validate();
  Rng rng(spec.rng_seed);

  SceneGeometry geo;
  geo.ground_height = spec.ground_height;
  geo.wall_distance = spec.wall_distance;
  geo.camera_center = spec.camera_offset;
  geo.focal_length = spec.focal_length;
  geo.image_width = spec.image_width;
  geo.image_height = spec.image_height;
  geo.objects = place_objects(spec, rng);

  const Vec3 lidar = {0.0, 0.0, 0.0};
  std::vector<Point3f> points;
  std::vector<std::int32_t> surface;
  auto keep_if_visible = [&](const Vec3& p, std::int32_t s) {
    const Point3f stored = to_point(p);
    if (geo.occluded(lidar, to_vec(stored))) return false;
    points.push_back(stored);
    surface.push_back(s);
    return true;
  };

  const std::uint64_t attempts_per_point = 40;
  for (std::size_t i = 0; i < geo.objects.size(); ++i) {
    std::uint32_t kept = 0;
    for (std::uint64_t a = 0;
         a < attempts_per_point * spec.points_per_object &&
         kept < spec.points_per_object;
         ++a) {
      if (keep_if_visible(sample_on_object(geo.objects[i], geo.ground_height, rng),
                          static_cast<std::int32_t>(i))) {
        ++kept;
      }
    }
  }

  const double tan_h = spec.image_width / 2.0 / spec.focal_length;
  const double tan_v = spec.image_height / 2.0 / spec.focal_length;
  for (std::uint32_t kept = 0, a = 0;
       kept < spec.ground_points && a < attempts_per_point * spec.ground_points;
       ++a) {
    const double z = rng.uniform(3.0, spec.wall_distance);
    const double x_lim = 1.15 * z * tan_h + 1.0;
    const Vec3 p = {rng.uniform(-x_lim, x_lim), spec.ground_height, z};
    if (keep_if_visible(p, kSurfaceGround)) ++kept;
  }
  const double wall_x = 1.15 * spec.wall_distance * tan_h;
  const double wall_top = -1.15 * spec.wall_distance * tan_v;
  for (std::uint32_t kept = 0, a = 0;
       kept < spec.wall_points && a < attempts_per_point * spec.wall_points;
       ++a) {
    const Vec3 p = {rng.uniform(-wall_x, wall_x),
                    rng.uniform(wall_top, spec.ground_height),
                    spec.wall_distance};
    if (keep_if_visible(p, kSurfaceWall)) ++kept;
  }

  SyntheticScene scene =
      assemble_scene(geo, std::move(points), std::move(surface), spec);

  // Sparse noisy seeds: three draws per point keep the stream aligned.
  const auto gt = scene.gt.values();
  std::vector<ClassId> seeds(gt.size(), kIgnore);
  const auto n_classes = spec.num_classes;
  for (std::size_t k = 0; k < gt.size(); ++k) {
    const double keep = rng.uniform();
    const double flip = rng.uniform();
    const double pick = rng.uniform();
    if (keep >= spec.seed_fraction_for(gt[k])) continue;
    ClassId c = gt[k];
    if (flip < spec.noise_rate) {
      const auto idx = std::min<ClassId>(
          static_cast<ClassId>(pick * (n_classes - 1)),
          static_cast<ClassId>(n_classes - 2));
      c = idx < gt[k] ? idx : idx + 1;
    }
    seeds[k] = c;
  }
  scene.seeds = LabelVector(std::move(seeds), spec.num_classes);
  return scene;
}

IndexSet misaligned_points(const SyntheticScene& scene) {
  const PixelProjection proj = project_points(scene.cloud, scene.camera);
  IndexSet out;
  for (std::size_t k = 0; k < scene.cloud.size(); ++k) {
    const auto i = static_cast<PointIndex>(k);
    const auto& px = proj[i];
    if (!px) continue;
    for (std::size_t j = 0; j < scene.masks.size(); ++j) {
      const auto& origin = scene.mask_origins[j];
      if (origin.kind != MaskKind::kObject) continue;
      if (scene.masks[j].at(px->v, px->u) && scene.gt[i] != origin.label) {
        out.push_back(i);
        break;
      }
    }
  }
  return out;
}

std::size_t count_misaligned(const SyntheticScene& scene) {
  return misaligned_points(scene).size();
}

io::SceneManifest write_scene(const std::filesystem::path& out_dir,
                              const std::string& id,
                              const SyntheticScene& scene) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir / id, ec);
  if (ec) {
    throw Error(ErrorCode::kIo,
                (out_dir / id).string() + ": cannot create directory: " +
                    ec.message());
  }
  io::SceneManifest entry;
  entry.id = id;
  entry.points = fs::path(id) / "points.plpc";
  entry.labels = fs::path(id) / "labels.pllb";
  entry.gt = fs::path(id) / "gt.pllb";
  entry.masks = fs::path(id) / "masks.json";
  entry.calib = fs::path(id) / "calib.json";
  io::write_points(out_dir / entry.points, scene.cloud);
  io::write_labels(out_dir / entry.labels, scene.seeds);
  io::write_labels(out_dir / *entry.gt, scene.gt);
  io::write_masks(out_dir / entry.masks, scene.masks);
  io::write_calibration(out_dir / entry.calib, scene.camera);
  return entry;
}

}  // namespace plenhance::synth
