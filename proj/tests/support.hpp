#pragma once

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "artic/articulated.hpp"
#include "artic/point_cloud.hpp"

namespace testing_support {

using artic::Vec3;

inline artic::Joint revolute(int id, int parent, int child, Vec3 axis, Vec3 anchor, double lo,
                             double hi) {
  artic::Joint j;
  j.id = id;
  j.kind = artic::JointKind::Revolute;
  j.axis = axis.normalized();
  j.anchor = anchor;
  j.lower = lo;
  j.upper = hi;
  j.parent = parent;
  j.child = child;
  return j;
}

inline artic::Joint prismatic(int id, int parent, int child, Vec3 axis, double lo, double hi) {
  artic::Joint j = revolute(id, parent, child, axis, Vec3::Zero(), lo, hi);
  j.kind = artic::JointKind::Prismatic;
  return j;
}

inline artic::Part part(int id, artic::SemanticClass sem, artic::Box box) {
  artic::Part p;
  p.id = id;
  p.semantic = sem;
  p.boxes = {box};
  p.color = Vec3(0.1 * id, 0.5, 0.9 - 0.1 * id);
  return p;
}

/// Body box plus a door hinged about +z at x = 0.5 on the front face.
inline artic::ArticulatedModel door_model() {
  artic::ArticulatedModel m;
  m.name = "door";
  m.template_kind = "cabinet_door";
  m.parts.push_back(part(0, artic::SemanticClass::Body, {{-0.5, -0.5, -0.5}, {0.5, 0.5, 0.5}}));
  m.parts.push_back(part(1, artic::SemanticClass::HingedDoor, {{-0.5, 0.51, -0.5}, {0.5, 0.53, 0.5}}));
  m.joints.push_back(revolute(0, 0, 1, Vec3::UnitZ(), Vec3(0.5, 0.51, 0), 0.0, M_PI / 2));
  return m;
}

/// Points on the surface boxes of every part, labeled, at configuration q.
artic::PointCloudFrame sample_surface(const artic::ArticulatedModel& m, const artic::JointConfig& q,
                                      int per_part, std::uint64_t seed);

/// Central finite difference of f at x along coordinate i.
inline double central_diff(const std::function<double(double)>& f, double x, double h = 1e-6) {
  return (f(x + h) - f(x - h)) / (2 * h);
}

inline double rel_err(double a, double b, double floor = 1e-6) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

}  // namespace testing_support
