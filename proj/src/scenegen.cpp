#include "artic/scenegen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "artic/errors.hpp"

namespace artic {

namespace {

constexpr double kGap = 0.005;    // clearance between a moving part and the body
constexpr double kPanel = 0.02;   // door / pane thickness
constexpr double kHalfPi = std::numbers::pi / 2.0;

Box make_box(double x0, double x1, double y0, double y1, double z0, double z1) {
  return {Vec3(x0, y0, z0), Vec3(x1, y1, z1)};
}

Part make_part(int id, SemanticClass sem, Box box) {
  Part p;
  p.id = id;
  p.semantic = sem;
  p.boxes.push_back(box);
  return p;
}

Joint revolute(int id, int child, const Vec3& axis, const Vec3& anchor) {
  Joint j;
  j.id = id;
  j.kind = JointKind::Revolute;
  j.axis = axis;
  j.anchor = anchor;
  j.lower = 0.0;
  j.upper = kHalfPi;
  j.parent = 0;
  j.child = child;
  return j;
}

Joint prismatic(int id, int child, const Vec3& axis, double travel) {
  Joint j;
  j.id = id;
  j.kind = JointKind::Prismatic;
  j.axis = axis;
  j.lower = 0.0;
  j.upper = travel;
  j.parent = 0;
  j.child = child;
  return j;
}

Box body_box(const TemplateDims& d) {
  return make_box(-d.width / 2, d.width / 2, -d.depth / 2, d.depth / 2, -d.height / 2, d.height / 2);
}

// Doors are anchored at the front face of their hinge edge so that opening swings
// the free edge forward and never back into the body.
void build_cabinet_door(ArticulatedModel& m, const TemplateDims& d) {
  const double front = d.depth / 2 + kGap;
  m.parts.push_back(make_part(0, SemanticClass::Body, body_box(d)));
  m.parts.push_back(make_part(1, SemanticClass::HingedDoor,
                              make_box(-d.width / 2, d.width / 2, front, front + kPanel,
                                       -d.height / 2, d.height / 2)));
  m.joints.push_back(revolute(0, 1, Vec3::UnitZ(), Vec3(-d.width / 2, front + kPanel, 0.0)));
}

void build_cabinet_drawer(ArticulatedModel& m, const TemplateDims& d) {
  const double front = d.depth / 2 + kGap;
  m.parts.push_back(make_part(0, SemanticClass::Body, body_box(d)));
  m.parts.push_back(make_part(1, SemanticClass::Drawer,
                              make_box(-0.35 * d.width, 0.35 * d.width, front, front + 0.25 * d.depth,
                                       -0.25 * d.height, 0.15 * d.height)));
  m.joints.push_back(prismatic(0, 1, Vec3::UnitY(), 0.4 * d.depth));
}

// Two half-width doors meeting at the center line, each hinged on the edge it
// shares with the other door.
void build_cabinet_two_door(ArticulatedModel& m, const TemplateDims& d) {
  const double front = d.depth / 2 + kGap;
  m.parts.push_back(make_part(0, SemanticClass::Body, body_box(d)));
  m.parts.push_back(make_part(1, SemanticClass::HingedDoor,
                              make_box(-d.width / 2, -kGap / 2, front, front + kPanel,
                                       -d.height / 2, d.height / 2)));
  m.parts.push_back(make_part(2, SemanticClass::HingedDoor,
                              make_box(kGap / 2, d.width / 2, front, front + kPanel,
                                       -d.height / 2, d.height / 2)));
  m.joints.push_back(revolute(0, 1, -Vec3::UnitZ(), Vec3(-kGap / 2, front + kPanel, 0.0)));
  m.joints.push_back(revolute(1, 2, Vec3::UnitZ(), Vec3(kGap / 2, front + kPanel, 0.0)));
}

// Upper full-width door hinged on the left edge; a half-width drawer below it on
// the hinge side.
void build_cabinet_door_drawer(ArticulatedModel& m, const TemplateDims& d) {
  const double front = d.depth / 2 + kGap;
  m.parts.push_back(make_part(0, SemanticClass::Body, body_box(d)));
  m.parts.push_back(make_part(1, SemanticClass::HingedDoor,
                              make_box(-d.width / 2, d.width / 2, front, front + kPanel, kGap / 2,
                                       d.height / 2)));
  m.parts.push_back(make_part(2, SemanticClass::Drawer,
                              make_box(-0.45 * d.width, -0.05 * d.width, front, front + 0.25 * d.depth,
                                       -0.4 * d.height, -0.1 * d.height)));
  m.joints.push_back(revolute(0, 1, Vec3::UnitZ(), Vec3(-d.width / 2, front + kPanel, 0.0)));
  m.joints.push_back(prismatic(1, 2, Vec3::UnitY(), 0.4 * d.depth));
}

// Base slab with a lid resting on top, hinged along the rear edge.
void build_laptop_lid(ArticulatedModel& m, const TemplateDims& d) {
  const double top = d.height / 2 + kGap;
  const double lid = 0.3 * d.height;
  m.parts.push_back(make_part(0, SemanticClass::Body, body_box(d)));
  m.parts.push_back(make_part(1, SemanticClass::Lid,
                              make_box(-0.47 * d.width, 0.47 * d.width, -d.depth / 2,
                                       -d.depth / 2 + 0.94 * d.depth, top, top + lid)));
  m.joints.push_back(revolute(0, 1, Vec3::UnitX(), Vec3(0.0, -d.depth / 2, top + lid)));
}

void build_slider_window(ArticulatedModel& m, const TemplateDims& d) {
  const double front = d.depth / 2 + kGap;
  m.parts.push_back(make_part(0, SemanticClass::Body, body_box(d)));
  m.parts.push_back(make_part(1, SemanticClass::Slider,
                              make_box(-d.width / 2, 0.0, front, front + kPanel, -0.45 * d.height,
                                       0.45 * d.height)));
  m.joints.push_back(prismatic(0, 1, Vec3::UnitX(), 0.4 * d.depth));
}

// Blade with two handles pivoting about the z axis, one above and one below.
void build_scissors_legs(ArticulatedModel& m, const TemplateDims& d) {
  const double len = d.width;
  const double half_w = d.depth / 2;
  const double half_h = d.height / 2;
  const double leg_h = 0.75 * d.height;
  m.parts.push_back(make_part(0, SemanticClass::Body,
                              make_box(-0.22 * len, 0.78 * len, -half_w, half_w, -half_h, half_h)));
  m.parts.push_back(make_part(1, SemanticClass::Leg,
                              make_box(-0.55 * len, 0.05 * len, -0.8 * half_w, 0.8 * half_w,
                                       half_h + kGap, half_h + kGap + leg_h)));
  m.parts.push_back(make_part(2, SemanticClass::Leg,
                              make_box(-0.55 * len, 0.05 * len, -0.8 * half_w, 0.8 * half_w,
                                       -half_h - kGap - leg_h, -half_h - kGap)));
  m.joints.push_back(revolute(0, 1, Vec3::UnitZ(), Vec3::Zero()));
  m.joints.push_back(revolute(1, 2, -Vec3::UnitZ(), Vec3::Zero()));
}

void assign_colors(ArticulatedModel& m, std::uint64_t seed) {
  std::mt19937_64 rng(mix_seed(seed, 0xC010u));
  std::vector<Vec3> used;
  for (auto& p : m.parts) {
    Vec3 c;
    for (int attempt = 0;; ++attempt) {
      c = Vec3(0.1 + 0.8 * uniform01(rng), 0.1 + 0.8 * uniform01(rng), 0.1 + 0.8 * uniform01(rng));
      const bool distinct = std::all_of(used.begin(), used.end(),
                                        [&](const Vec3& u) { return (u - c).norm() >= 0.35; });
      if (distinct || attempt > 1000) break;
    }
    used.push_back(c);
    p.color = c;
  }
}

const std::vector<std::string>& cycle_list(Subset s) {
  static const std::vector<std::string> all = template_kinds();
  switch (s) {
    case Subset::S: return single_part_templates();
    case Subset::D: return two_part_templates();
    case Subset::M: break;
  }
  return all;
}

}  // namespace

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double uniform01(std::mt19937_64& rng) { return double(rng() >> 11) * 0x1.0p-53; }

const std::vector<std::string>& template_kinds() {
  static const std::vector<std::string> kinds = {
      "cabinet_door", "cabinet_drawer",  "cabinet_two_door", "cabinet_door_drawer",
      "laptop_lid",   "slider_window",   "scissors_legs"};
  return kinds;
}

const std::vector<std::string>& single_part_templates() {
  static const std::vector<std::string> kinds = {"cabinet_door", "cabinet_drawer", "laptop_lid",
                                                 "slider_window"};
  return kinds;
}

const std::vector<std::string>& two_part_templates() {
  static const std::vector<std::string> kinds = {"cabinet_two_door", "cabinet_door_drawer",
                                                 "scissors_legs"};
  return kinds;
}

TemplateDims default_dims(const std::string& kind) {
  if (kind == "laptop_lid") return {0.34, 0.24, 0.025};
  if (kind == "slider_window") return {0.8, 0.3, 0.5};
  if (kind == "scissors_legs") return {0.18, 0.03, 0.008};
  if (kind == "cabinet_drawer") return {0.5, 0.4, 0.5};
  if (std::find(template_kinds().begin(), template_kinds().end(), kind) == template_kinds().end()) {
    throw InvalidArgument("unknown template '" + kind + "'");
  }
  return {0.5, 0.4, 0.7};
}

ArticulatedModel build_template(const std::string& kind, const TemplateDims& dims,
                                std::uint64_t seed) {
  if (!(dims.width > 0 && dims.depth > 0 && dims.height > 0)) {
    throw InvalidArgument("template dimensions must be positive");
  }
  ArticulatedModel m;
  m.name = kind;
  m.template_kind = kind;
  m.root = 0;
  if (kind == "cabinet_door") {
    build_cabinet_door(m, dims);
  } else if (kind == "cabinet_drawer") {
    build_cabinet_drawer(m, dims);
  } else if (kind == "cabinet_two_door") {
    build_cabinet_two_door(m, dims);
  } else if (kind == "cabinet_door_drawer") {
    build_cabinet_door_drawer(m, dims);
  } else if (kind == "laptop_lid") {
    build_laptop_lid(m, dims);
  } else if (kind == "slider_window") {
    build_slider_window(m, dims);
  } else if (kind == "scissors_legs") {
    build_scissors_legs(m, dims);
  } else {
    throw InvalidArgument("unknown template '" + kind + "'");
  }
  assign_colors(m, seed);
  m.validate();
  return m;
}

Subset subset_from_string(const std::string& s) {
  if (s == "S") return Subset::S;
  if (s == "D") return Subset::D;
  if (s == "M") return Subset::M;
  throw InvalidArgument("unknown subset '" + s + "' (expected S, D or M)");
}

std::string to_string(Subset s) {
  switch (s) {
    case Subset::S: return "S";
    case Subset::D: return "D";
    case Subset::M: return "M";
  }
  return "?";
}

std::vector<ScenarioItem> scenario(std::uint64_t seed, const ScenarioOptions& options) {
  if (options.n_states < 2) throw InvalidArgument("scenario needs n_states >= 2");
  if (options.exponent_menu.empty()) throw InvalidArgument("empty exponent menu");
  std::vector<std::string> kinds =
      options.templates.empty() ? cycle_list(options.subset) : options.templates;
  // A seeded permutation, cycled, so every template shows up before any repeats.
  std::mt19937_64 order_rng(mix_seed(seed, 0x5EEDu));
  for (std::size_t i = kinds.size(); i > 1; --i) std::swap(kinds[i - 1], kinds[order_rng() % i]);

  std::vector<ScenarioItem> items;
  for (int k = 0; k < options.count; ++k) {
    const auto object_seed = mix_seed(seed, 1000 + static_cast<std::uint64_t>(k));
    std::mt19937_64 rng(object_seed);
    const auto& kind = kinds[k % kinds.size()];
    auto dims = default_dims(kind);
    for (double* v : {&dims.width, &dims.depth, &dims.height}) {
      *v *= 1.0 + options.dims_jitter * (2.0 * uniform01(rng) - 1.0);
    }
    ScenarioItem item;
    item.model = build_template(kind, dims, object_seed);
    char name[96];
    std::snprintf(name, sizeof(name), "%s_%03d_%s", to_string(options.subset).c_str(), k, kind.c_str());
    item.name = name;
    item.model.name = item.name;
    for (const auto& j : item.model.joints) {
      TrajectoryProfile p;
      p.kind = (rng() & 1u) ? ProfileKind::Sigmoid : ProfileKind::Power;
      p.exponent = options.exponent_menu[rng() % options.exponent_menu.size()];
      p.inverted = (rng() & 1u) != 0;
      p.q0 = j.lower;
      p.qf = j.upper;
      p.duration = options.duration;
      item.profiles.push_back(p);
    }
    item.states = sample_states(item.profiles, options.n_states);
    items.push_back(std::move(item));
  }
  return items;
}

}  // namespace artic
