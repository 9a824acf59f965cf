#include "artic/articulated.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <nlohmann/json.hpp>

#include "artic/errors.hpp"
#include "artic/kinematics.hpp"

namespace artic {

std::string_view class_name(SemanticClass c) {
  switch (c) {
    case SemanticClass::Body: return "body";
    case SemanticClass::Drawer: return "drawer";
    case SemanticClass::HingedDoor: return "hinged_door";
    case SemanticClass::Lid: return "lid";
    case SemanticClass::Leg: return "leg";
    case SemanticClass::Slider: return "slider";
  }
  return "unknown";
}

SemanticClass class_from_index(int index) {
  if (index < 0 || index >= kNumClasses) {
    throw InvalidArgument("semantic class index " + std::to_string(index) + " out of range");
  }
  return static_cast<SemanticClass>(index);
}

std::string_view joint_kind_name(JointKind k) {
  return k == JointKind::Revolute ? "revolute" : "prismatic";
}

std::vector<Triangle> Part::mesh() const {
  std::vector<Triangle> tris;
  tris.reserve(12 * boxes.size());
  for (const auto& b : boxes) {
    auto shell = box_shell(b);
    tris.insert(tris.end(), shell.begin(), shell.end());
  }
  return tris;
}

void ArticulatedModel::validate() const {
  const int n = static_cast<int>(parts.size());
  if (n == 0) throw InvalidArgument("model '" + name + "' has no parts");
  for (int i = 0; i < n; ++i) {
    if (parts[i].id != i) throw InvalidArgument("part ids must be dense from 0");
  }
  if (root < 0 || root >= n) throw InvalidArgument("root part id out of range");
  int bodies = 0;
  for (const auto& p : parts) bodies += p.semantic == SemanticClass::Body ? 1 : 0;
  if (bodies != 1 || parts[root].semantic != SemanticClass::Body) {
    throw InvalidArgument("model '" + name + "' must have exactly one body part, at the root");
  }
  std::vector<int> parent_count(n, 0);
  for (std::size_t j = 0; j < joints.size(); ++j) {
    const auto& jt = joints[j];
    if (jt.id != static_cast<int>(j)) throw InvalidArgument("joint ids must be dense from 0");
    if (jt.parent < 0 || jt.parent >= n || jt.child < 0 || jt.child >= n) {
      throw InvalidArgument("joint " + std::to_string(jt.id) + " references an unknown part");
    }
    if (std::abs(jt.axis.norm() - 1.0) > 1e-9) {
      throw InvalidArgument("joint " + std::to_string(jt.id) + " axis is not unit length");
    }
    if (!(jt.lower < jt.upper)) {
      throw InvalidArgument("joint " + std::to_string(jt.id) + " has lower >= upper");
    }
    if (jt.child == root) throw InvalidArgument("the root part cannot be a joint child");
    ++parent_count[jt.child];
  }
  for (int i = 0; i < n; ++i) {
    if (i != root && parent_count[i] != 1) {
      throw InvalidArgument("part " + std::to_string(i) + " must be the child of exactly one joint");
    }
  }
  // Walking up from every part must reach the root without revisiting a part.
  for (int i = 0; i < n; ++i) {
    int cur = i;
    for (int steps = 0; cur != root; ++steps) {
      if (steps > n) throw InvalidArgument("joint graph contains a cycle");
      cur = joints[parent_joint(cur)].parent;
    }
  }
}

const Part& ArticulatedModel::part(int id) const {
  if (id < 0 || id >= static_cast<int>(parts.size())) {
    throw InvalidArgument("unknown part id " + std::to_string(id));
  }
  return parts[id];
}

int ArticulatedModel::parent_joint(int part_id) const {
  for (const auto& j : joints) {
    if (j.child == part_id) return j.id;
  }
  return -1;
}

std::vector<int> ArticulatedModel::chain(int part_id) const {
  part(part_id);
  std::vector<int> out;
  int cur = part_id;
  while (cur != root) {
    const int j = parent_joint(cur);
    if (j < 0 || out.size() > joints.size()) {
      throw InvalidArgument("part " + std::to_string(part_id) + " is not connected to the root");
    }
    out.push_back(j);
    cur = joints[j].parent;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

double ArticulatedModel::bounding_radius() const {
  constexpr int kSteps = 5;
  const std::size_t nj = joints.size();
  // Grid over at most the first five joints; any further joints stay at their lower limit.
  const std::size_t gridded = std::min<std::size_t>(nj, 5);
  std::size_t combos = 1;
  for (std::size_t j = 0; j < gridded; ++j) combos *= kSteps;
  double radius = 0.0;
  JointConfig q{std::vector<double>(nj, 0.0)};
  for (std::size_t c = 0; c < combos; ++c) {
    std::size_t code = c;
    for (std::size_t j = 0; j < nj; ++j) {
      std::size_t step = 0;
      if (j < gridded) {
        step = code % kSteps;
        code /= kSteps;
      }
      q[j] = joints[j].lower + (joints[j].upper - joints[j].lower) * double(step) / (kSteps - 1);
    }
    for (const auto& p : parts) {
      const auto pose = part_pose(*this, p.id, q);
      for (const auto& b : p.boxes) {
        for (const auto& corner : b.corners()) radius = std::max(radius, pose.apply(corner).norm());
      }
    }
  }
  return radius;
}

namespace {

nlohmann::json vec_json(const Vec3& v) { return nlohmann::json::array({v.x(), v.y(), v.z()}); }

Vec3 json_vec(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 3) throw FormatError("expected a 3-vector");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

}  // namespace

void to_json(nlohmann::json& j, const ArticulatedModel& m) {
  j = nlohmann::json::object();
  j["format"] = "artic-canon-model";
  j["version"] = 1;
  j["name"] = m.name;
  j["template"] = m.template_kind;
  j["root"] = m.root;
  auto parts = nlohmann::json::array();
  for (const auto& p : m.parts) {
    auto boxes = nlohmann::json::array();
    for (const auto& b : p.boxes) boxes.push_back({{"lo", vec_json(b.lo)}, {"hi", vec_json(b.hi)}});
    parts.push_back({{"id", p.id},
                     {"semantic", static_cast<int>(p.semantic)},
                     {"semantic_name", std::string(class_name(p.semantic))},
                     {"color", vec_json(p.color)},
                     {"boxes", boxes}});
  }
  j["parts"] = parts;
  auto joints = nlohmann::json::array();
  for (const auto& jt : m.joints) {
    joints.push_back({{"id", jt.id},
                      {"kind", std::string(joint_kind_name(jt.kind))},
                      {"axis", vec_json(jt.axis)},
                      {"anchor", vec_json(jt.anchor)},
                      {"limits", {jt.lower, jt.upper}},
                      {"parent", jt.parent},
                      {"child", jt.child}});
  }
  j["joints"] = joints;
}

void from_json(const nlohmann::json& j, ArticulatedModel& m) {
  try {
    if (j.value("format", std::string()) != "artic-canon-model") {
      throw FormatError("not an artic-canon model document");
    }
    if (j.at("version").get<int>() != 1) throw FormatError("unsupported model version");
    m = ArticulatedModel{};
    m.name = j.at("name").get<std::string>();
    m.template_kind = j.value("template", std::string());
    m.root = j.at("root").get<int>();
    for (const auto& jp : j.at("parts")) {
      Part p;
      p.id = jp.at("id").get<int>();
      p.semantic = class_from_index(jp.at("semantic").get<int>());
      p.color = json_vec(jp.at("color"));
      for (const auto& jb : jp.at("boxes")) p.boxes.push_back({json_vec(jb.at("lo")), json_vec(jb.at("hi"))});
      m.parts.push_back(std::move(p));
    }
    for (const auto& jj : j.at("joints")) {
      Joint jt;
      jt.id = jj.at("id").get<int>();
      const auto kind = jj.at("kind").get<std::string>();
      if (kind == "revolute") {
        jt.kind = JointKind::Revolute;
      } else if (kind == "prismatic") {
        jt.kind = JointKind::Prismatic;
      } else {
        throw FormatError("unknown joint kind '" + kind + "'");
      }
      jt.axis = json_vec(jj.at("axis"));
      jt.anchor = json_vec(jj.at("anchor"));
      jt.lower = jj.at("limits").at(0).get<double>();
      jt.upper = jj.at("limits").at(1).get<double>();
      jt.parent = jj.at("parent").get<int>();
      jt.child = jj.at("child").get<int>();
      m.joints.push_back(jt);
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed model JSON: ") + e.what());
  }
  m.validate();
}

void to_json(nlohmann::json& j, const JointConfig& q) { j = q.values; }

void from_json(const nlohmann::json& j, JointConfig& q) { q.values = j.get<std::vector<double>>(); }

}  // namespace artic
