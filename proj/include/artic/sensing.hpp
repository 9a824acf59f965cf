#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "artic/articulated.hpp"
#include "artic/point_cloud.hpp"

namespace artic {

/// Pinhole intrinsics. Pixel (u, v) has its center at image coordinates (u, v); the
/// principal point defaults to the image center ((W-1)/2, (H-1)/2).
struct CameraIntrinsics {
  int width = 128;
  int height = 128;
  double focal = 100.0;  ///< pixels
  double cx = 63.5;
  double cy = 63.5;

  /// Intrinsics whose field of view just encloses a sphere of radius `object_radius`
  /// seen from `distance`.
  static CameraIntrinsics enclosing(int width, int height, double object_radius, double distance);
};

struct CameraPose {
  Vec3 position = Vec3(0, 0, 1);
  Vec3 look_at = Vec3::Zero();
  Vec3 up = Vec3::UnitZ();
  CameraIntrinsics intrinsics;

  /// Orthonormal camera basis: x right, y down, z along the optical axis.
  Mat3 basis() const;
  /// Unit ray direction (world frame) through the center of pixel (u, v).
  Vec3 ray(double u, double v) const;
  /// Image coordinates of a world point; returns false behind the camera.
  bool project(const Vec3& p, double& u, double& v) const;
};

/// Point on a sphere of radius r at polar angle theta and azimuth phi.
Vec3 sphere_position(double r, double theta, double phi);

/// `count` cameras on a Fibonacci lattice of the sphere of radius r, all looking at the origin.
std::vector<CameraPose> camera_positions(double r, int count,
                                         const CameraIntrinsics& intrinsics = {});

struct RenderOutput {
  int width = 0;
  int height = 0;
  std::vector<double> depth;  ///< Euclidean distance along the ray; NaN where invalid
  std::vector<std::uint8_t> valid;
  std::vector<Vec3> rgb;
  std::vector<SemanticClass> semantic;
  std::vector<std::uint32_t> instance;

  std::size_t index(int u, int v) const { return static_cast<std::size_t>(v) * width + u; }
};

/// Nearest ray-triangle hit over every posed part, per pixel.
RenderOutput render(const ArticulatedModel& model, const JointConfig& q, const CameraPose& camera);

/// Valid pixels, in row-major order, lifted to world points on their viewing rays.
PointCloudFrame backproject(const RenderOutput& image, const CameraPose& camera);

/// Exact greedy farthest point sampling. The first pick is the point farthest from
/// the centroid; every tie goes to the lowest index. Returns indices in pick order.
std::vector<std::size_t> farthest_point_sampling(std::span<const Vec3> points, std::size_t m);

/// Concatenates the views in order and downsamples to exactly m points.
PointCloudFrame fuse_and_sample(const std::vector<PointCloudFrame>& views, std::size_t m);

struct CaptureSettings {
  int views = 18;
  int resolution = 128;
  std::size_t points = 2048;
  double radius_factor = 2.5;  ///< camera sphere radius / model bounding radius
};

/// Cameras used for a model under `settings`.
std::vector<CameraPose> capture_cameras(const ArticulatedModel& model, const CaptureSettings& settings);

/// Render every view of one articulation state, fuse and downsample.
PointCloudFrame capture_state(const ArticulatedModel& model, const JointConfig& q,
                              const std::vector<CameraPose>& cameras, std::size_t points);

}  // namespace artic
