#include "artic/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "artic/errors.hpp"

namespace artic {

LimitViolation::LimitViolation(int joint_id, double value, double lower, double upper)
    : Error("joint " + std::to_string(joint_id) + ": value " + std::to_string(value) +
            " outside limits [" + std::to_string(lower) + ", " + std::to_string(upper) + "]"),
      joint_id_(joint_id) {}

DivergenceError::DivergenceError(int epoch, const std::string& what)
    : Error(epoch > 0 ? "training diverged at epoch " + std::to_string(epoch) + ": " + what
                      : "diverged: " + what),
      epoch_(epoch) {}

RigidTransform rotation_about(const Vec3& axis, double angle, const Vec3& anchor) {
  RigidTransform t;
  t.rotation = Eigen::AngleAxisd(angle, axis.normalized()).toRotationMatrix();
  t.translation = anchor - t.rotation * anchor;
  return t;
}

RigidTransform translation_by(const Vec3& offset) {
  RigidTransform t;
  t.translation = offset;
  return t;
}

bool Box::contains(const Vec3& p, double tol) const {
  for (int d = 0; d < 3; ++d) {
    if (p[d] < lo[d] - tol || p[d] > hi[d] + tol) return false;
  }
  return true;
}

double Box::distance(const Vec3& p) const {
  Vec3 gap;
  for (int d = 0; d < 3; ++d) gap[d] = std::max({lo[d] - p[d], 0.0, p[d] - hi[d]});
  return gap.norm();
}

std::array<Vec3, 8> Box::corners() const {
  std::array<Vec3, 8> out;
  for (int i = 0; i < 8; ++i) {
    out[i] = Vec3((i & 1) ? hi.x() : lo.x(), (i & 2) ? hi.y() : lo.y(), (i & 4) ? hi.z() : lo.z());
  }
  return out;
}

std::vector<Triangle> box_shell(const Box& box) {
  const auto c = box.corners();
  // Quads listed counter-clockwise when seen from outside.
  static constexpr int kQuads[6][4] = {
      {0, 4, 6, 2},  // -x
      {1, 3, 7, 5},  // +x
      {0, 1, 5, 4},  // -y
      {2, 6, 7, 3},  // +y
      {0, 2, 3, 1},  // -z
      {4, 5, 7, 6},  // +z
  };
  std::vector<Triangle> tris;
  tris.reserve(12);
  for (const auto& q : kQuads) {
    tris.push_back({{c[q[0]], c[q[1]], c[q[2]]}});
    tris.push_back({{c[q[0]], c[q[2]], c[q[3]]}});
  }
  return tris;
}

double intersect_triangle(const Vec3& origin, const Vec3& dir, const Triangle& tri) {
  constexpr double kEps = 1e-14;
  const Vec3 e1 = tri.v[1] - tri.v[0];
  const Vec3 e2 = tri.v[2] - tri.v[0];
  const Vec3 p = dir.cross(e2);
  const double det = e1.dot(p);
  if (std::abs(det) < kEps) return -1.0;
  const double inv_det = 1.0 / det;
  const Vec3 s = origin - tri.v[0];
  const double u = s.dot(p) * inv_det;
  if (u < 0.0 || u > 1.0) return -1.0;
  const Vec3 q = s.cross(e1);
  const double v = dir.dot(q) * inv_det;
  if (v < 0.0 || u + v > 1.0) return -1.0;
  const double t = e2.dot(q) * inv_det;
  return t > kEps ? t : -1.0;
}

bool intersect_box(const Vec3& origin, const Vec3& inv_dir, const Box& box, double& t_enter,
                   double& t_exit) {
  double t0 = -std::numeric_limits<double>::infinity();
  double t1 = std::numeric_limits<double>::infinity();
  for (int d = 0; d < 3; ++d) {
    double a = (box.lo[d] - origin[d]) * inv_dir[d];
    double b = (box.hi[d] - origin[d]) * inv_dir[d];
    if (std::isnan(a) || std::isnan(b)) {
      // Ray parallel to the slab and lying on its boundary plane.
      if (origin[d] < box.lo[d] || origin[d] > box.hi[d]) return false;
      continue;
    }
    if (a > b) std::swap(a, b);
    t0 = std::max(t0, a);
    t1 = std::min(t1, b);
  }
  t_enter = t0;
  t_exit = t1;
  return t1 >= t0 && t1 >= 0.0;
}

}  // namespace artic
