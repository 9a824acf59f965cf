#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "artic/geometry.hpp"

namespace artic {

enum class SemanticClass : std::uint16_t {
  Body = 0,
  Drawer = 1,
  HingedDoor = 2,
  Lid = 3,
  Leg = 4,
  Slider = 5,
};

inline constexpr int kNumClasses = 6;

/// Body is the only stuff class; every other class carries instance ids.
constexpr bool is_thing(SemanticClass c) { return c != SemanticClass::Body; }

std::string_view class_name(SemanticClass c);
SemanticClass class_from_index(int index);

/// A rigid part. Geometry is a union of axis-aligned box shells expressed in the
/// part frame, which coincides with the origin frame at the all-zero configuration.
struct Part {
  int id = 0;
  SemanticClass semantic = SemanticClass::Body;
  std::vector<Box> boxes;
  Vec3 color = Vec3::Constant(0.5);

  std::vector<Triangle> mesh() const;
};

enum class JointKind { Revolute, Prismatic };

std::string_view joint_kind_name(JointKind k);

/// Axis and anchor are expressed in the parent part frame.
struct Joint {
  int id = 0;
  JointKind kind = JointKind::Revolute;
  Vec3 axis = Vec3::UnitZ();
  Vec3 anchor = Vec3::Zero();
  double lower = 0.0;
  double upper = 0.0;
  int parent = 0;
  int child = 0;

  bool within_limits(double value) const { return value >= lower && value <= upper; }
};

/// One value per joint, in joint order (radians or meters).
struct JointConfig {
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
  double& operator[](std::size_t i) { return values[i]; }
  bool operator==(const JointConfig&) const = default;
};

struct ArticulatedModel {
  std::string name;
  std::string template_kind;
  std::vector<Part> parts;
  std::vector<Joint> joints;
  int root = 0;

  /// Throws InvalidArgument when the part/joint tree is malformed.
  void validate() const;

  const Part& part(int id) const;
  /// Joint indices on the chain root -> part, ordered from the root.
  std::vector<int> chain(int part_id) const;
  /// Index of the joint whose child is `part_id`, or -1 for the root.
  int parent_joint(int part_id) const;
  /// Joints that move (every joint in this toolkit is actuated).
  int actuated_joints() const { return static_cast<int>(joints.size()); }
  /// Radius of a sphere about the origin enclosing the object over a grid of
  /// configurations spanning every joint range.
  double bounding_radius() const;
};

void to_json(nlohmann::json& j, const ArticulatedModel& m);
void from_json(const nlohmann::json& j, ArticulatedModel& m);
void to_json(nlohmann::json& j, const JointConfig& q);
void from_json(const nlohmann::json& j, JointConfig& q);

}  // namespace artic
