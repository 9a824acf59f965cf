#pragma once

#include <array>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace artic {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;

/// Proper rigid motion x -> R x + t.
struct RigidTransform {
  Mat3 rotation = Mat3::Identity();
  Vec3 translation = Vec3::Zero();

  static RigidTransform identity() { return {}; }

  Vec3 apply(const Vec3& x) const { return rotation * x + translation; }
  Vec3 apply_vector(const Vec3& v) const { return rotation * v; }

  // Closed form (R^T, -R^T t); no general matrix inversion.
  RigidTransform inverse() const {
    RigidTransform out;
    out.rotation = rotation.transpose();
    out.translation = -(out.rotation * translation);
    return out;
  }

  RigidTransform operator*(const RigidTransform& rhs) const {
    RigidTransform out;
    out.rotation = rotation * rhs.rotation;
    out.translation = rotation * rhs.translation + translation;
    return out;
  }

  Mat4 matrix() const {
    Mat4 m = Mat4::Identity();
    m.topLeftCorner<3, 3>() = rotation;
    m.topRightCorner<3, 1>() = translation;
    return m;
  }
};

/// Rotation of `angle` radians about the line through `anchor` along unit `axis`.
RigidTransform rotation_about(const Vec3& axis, double angle, const Vec3& anchor);

/// Pure translation.
RigidTransform translation_by(const Vec3& t);

/// Axis-aligned box given by its two extreme corners.
struct Box {
  Vec3 lo = Vec3::Zero();
  Vec3 hi = Vec3::Zero();

  Vec3 center() const { return 0.5 * (lo + hi); }
  Vec3 extent() const { return hi - lo; }
  bool contains(const Vec3& p, double tol = 0.0) const;
  /// Euclidean distance from `p` to the solid box (0 inside).
  double distance(const Vec3& p) const;
  std::array<Vec3, 8> corners() const;
};

struct Triangle {
  std::array<Vec3, 3> v;
  Vec3 normal() const { return (v[1] - v[0]).cross(v[2] - v[0]).normalized(); }
};

/// The 12 outward-oriented triangles of a box surface.
std::vector<Triangle> box_shell(const Box& box);

/// Moller-Trumbore. Returns the ray parameter of the hit, or a negative value on a miss.
/// `dir` need not be normalized; the parameter is in units of |dir|.
double intersect_triangle(const Vec3& origin, const Vec3& dir, const Triangle& tri);

/// Slab test. On a hit sets [t_enter, t_exit] and returns true.
bool intersect_box(const Vec3& origin, const Vec3& inv_dir, const Box& box, double& t_enter,
                   double& t_exit);

}  // namespace artic
