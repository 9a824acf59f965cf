#include "artic/sensing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "artic/errors.hpp"
#include "artic/kinematics.hpp"

namespace artic {

CameraIntrinsics CameraIntrinsics::enclosing(int width, int height, double object_radius,
                                             double distance) {
  if (!(distance > object_radius && object_radius > 0)) {
    throw InvalidArgument("camera must sit outside the object's bounding sphere");
  }
  CameraIntrinsics k;
  k.width = width;
  k.height = height;
  const double half_fov = std::asin(object_radius / distance);
  k.focal = 0.5 * std::min(width, height) / std::tan(half_fov);
  k.cx = 0.5 * (width - 1);
  k.cy = 0.5 * (height - 1);
  return k;
}

Mat3 CameraPose::basis() const {
  const Vec3 forward = (look_at - position).normalized();
  Vec3 right = forward.cross(up);
  if (right.norm() < 1e-9) right = forward.cross(Vec3::UnitY());
  if (right.norm() < 1e-9) right = forward.cross(Vec3::UnitX());
  right.normalize();
  const Vec3 down = forward.cross(right);
  Mat3 b;
  b.col(0) = right;
  b.col(1) = down;
  b.col(2) = forward;
  return b;
}

Vec3 CameraPose::ray(double u, double v) const {
  const Mat3 b = basis();
  const auto& k = intrinsics;
  return (b.col(2) + ((u - k.cx) / k.focal) * b.col(0) + ((v - k.cy) / k.focal) * b.col(1))
      .normalized();
}

bool CameraPose::project(const Vec3& p, double& u, double& v) const {
  const Vec3 local = basis().transpose() * (p - position);
  if (local.z() <= 0.0) return false;
  u = intrinsics.cx + intrinsics.focal * local.x() / local.z();
  v = intrinsics.cy + intrinsics.focal * local.y() / local.z();
  return true;
}

Vec3 sphere_position(double r, double theta, double phi) {
  return r * Vec3(std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta));
}

std::vector<CameraPose> camera_positions(double r, int count, const CameraIntrinsics& intrinsics) {
  if (!(r > 0)) throw InvalidArgument("camera sphere radius must be positive");
  if (count < 1) throw InvalidArgument("need at least one camera");
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  std::vector<CameraPose> cams;
  cams.reserve(count);
  for (int k = 0; k < count; ++k) {
    const double theta = std::acos(1.0 - 2.0 * (k + 0.5) / count);
    const double phi = std::fmod(golden * k, 2.0 * std::numbers::pi);
    CameraPose c;
    c.position = sphere_position(r, theta, phi);
    c.look_at = Vec3::Zero();
    c.up = Vec3::UnitZ();
    c.intrinsics = intrinsics;
    cams.push_back(c);
  }
  return cams;
}

namespace {

struct PosedPart {
  RigidTransform world_to_part;
  std::vector<Box> boxes;
  std::vector<std::vector<Triangle>> shells;  // one 12-triangle shell per box
  const Part* part = nullptr;
};

}  // namespace

RenderOutput render(const ArticulatedModel& model, const JointConfig& q, const CameraPose& camera) {
  check_config(model, q);
  std::vector<PosedPart> posed;
  posed.reserve(model.parts.size());
  for (const auto& p : model.parts) {
    PosedPart pp;
    pp.world_to_part = part_pose(model, p.id, q).inverse();
    pp.boxes = p.boxes;
    for (const auto& b : p.boxes) pp.shells.push_back(box_shell(b));
    pp.part = &p;
    posed.push_back(std::move(pp));
  }

  const int w = camera.intrinsics.width;
  const int h = camera.intrinsics.height;
  RenderOutput out;
  out.width = w;
  out.height = h;
  const auto n = static_cast<std::size_t>(w) * h;
  out.depth.assign(n, std::numeric_limits<double>::quiet_NaN());
  out.valid.assign(n, 0);
  out.rgb.assign(n, Vec3::Zero());
  out.semantic.assign(n, SemanticClass::Body);
  out.instance.assign(n, 0);

  const Mat3 basis = camera.basis();
  const auto& k = camera.intrinsics;
  for (int v = 0; v < h; ++v) {
    for (int u = 0; u < w; ++u) {
      const Vec3 dir =
          (basis.col(2) + ((u - k.cx) / k.focal) * basis.col(0) + ((v - k.cy) / k.focal) * basis.col(1))
              .normalized();
      double best = std::numeric_limits<double>::infinity();
      const PosedPart* hit = nullptr;
      for (const auto& pp : posed) {
        // Rigid change of frame keeps ray parameters metric.
        const Vec3 o = pp.world_to_part.apply(camera.position);
        const Vec3 d = pp.world_to_part.apply_vector(dir);
        const Vec3 inv = d.cwiseInverse();
        for (std::size_t b = 0; b < pp.boxes.size(); ++b) {
          double t0, t1;
          if (!intersect_box(o, inv, pp.boxes[b], t0, t1) || t0 >= best) continue;
          for (const auto& tri : pp.shells[b]) {
            const double t = intersect_triangle(o, d, tri);
            if (t > 0.0 && t < best) {
              best = t;
              hit = &pp;
            }
          }
        }
      }
      if (hit) {
        const auto i = out.index(u, v);
        out.depth[i] = best;
        out.valid[i] = 1;
        out.rgb[i] = hit->part->color;
        out.semantic[i] = hit->part->semantic;
        out.instance[i] = static_cast<std::uint32_t>(hit->part->id);
      }
    }
  }
  return out;
}

PointCloudFrame backproject(const RenderOutput& image, const CameraPose& camera) {
  PointCloudFrame frame;
  for (int v = 0; v < image.height; ++v) {
    for (int u = 0; u < image.width; ++u) {
      const auto i = image.index(u, v);
      if (!image.valid[i]) continue;
      frame.push_back(camera.position + image.depth[i] * camera.ray(u, v), image.rgb[i],
                      image.semantic[i], image.instance[i]);
    }
  }
  return frame;
}

namespace {

// Uniform grid over the cloud. Each cell tracks the bounding box of its members and the
// largest current nearest-pick distance inside it, so a new pick only touches cells it
// can actually improve. Picks are identical to the brute-force greedy scan.
class FpsGrid {
 public:
  FpsGrid(std::span<const Vec3> pts, std::vector<double>& mind) : pts_(pts), mind_(mind) {
    Vec3 lo = pts[0], hi = pts[0];
    for (const auto& p : pts) {
      lo = lo.cwiseMin(p);
      hi = hi.cwiseMax(p);
    }
    const double extent = (hi - lo).maxCoeff();
    const double cell = extent > 0 ? extent / kRes : 1.0;
    std::vector<std::uint32_t> key(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
      std::uint32_t c[3];
      for (int d = 0; d < 3; ++d) {
        c[d] = static_cast<std::uint32_t>(std::clamp((pts[i][d] - lo[d]) / cell, 0.0, kRes - 1.0));
      }
      key[i] = (c[0] * kRes + c[1]) * kRes + c[2];
    }
    std::vector<std::uint32_t> order(pts.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<std::uint32_t>(i);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return key[a] < key[b]; });
    cell_of_.resize(pts.size());
    for (std::size_t k = 0; k < order.size(); ++k) {
      const auto i = order[k];
      if (cells_.empty() || key[order[k - 1]] != key[i]) {
        cells_.push_back({});
        cells_.back().lo = pts[i];
        cells_.back().hi = pts[i];
      }
      auto& c = cells_.back();
      c.members.push_back(i);
      c.lo = c.lo.cwiseMin(pts[i]);
      c.hi = c.hi.cwiseMax(pts[i]);
      cell_of_[i] = static_cast<std::uint32_t>(cells_.size() - 1);
    }
  }

  void refresh_all() {
    for (auto& c : cells_) refresh(c);
  }

  void update(std::size_t picked) {
    const Vec3& s = pts_[picked];
    const auto home = cell_of_[picked];
    for (std::size_t ci = 0; ci < cells_.size(); ++ci) {
      auto& c = cells_[ci];
      if (ci != home) {
        if (c.max_val < 0) continue;
        Vec3 gap;
        for (int d = 0; d < 3; ++d) gap[d] = std::max({c.lo[d] - s[d], 0.0, s[d] - c.hi[d]});
        if (gap.squaredNorm() * (1.0 - 1e-12) >= c.max_val) continue;
      }
      for (const auto i : c.members) {
        if (mind_[i] < 0) continue;
        const double d = (pts_[i] - s).squaredNorm();
        if (d < mind_[i]) mind_[i] = d;
      }
      refresh(c);
    }
  }

  std::size_t argmax() const {
    double best = -1.0;
    std::size_t best_idx = 0;
    for (const auto& c : cells_) {
      if (c.max_val > best || (c.max_val == best && c.max_idx < best_idx)) {
        best = c.max_val;
        best_idx = c.max_idx;
      }
    }
    return best_idx;
  }

 private:
  static constexpr double kRes = 16.0;

  struct Cell {
    Vec3 lo, hi;
    std::vector<std::uint32_t> members;  // ascending point index
    double max_val = -1.0;
    std::size_t max_idx = 0;
  };

  void refresh(Cell& c) {
    c.max_val = -1.0;
    for (const auto i : c.members) {
      if (mind_[i] > c.max_val) {
        c.max_val = mind_[i];
        c.max_idx = i;
      }
    }
  }

  std::span<const Vec3> pts_;
  std::vector<double>& mind_;
  std::vector<Cell> cells_;
  std::vector<std::uint32_t> cell_of_;
};

}  // namespace

std::vector<std::size_t> farthest_point_sampling(std::span<const Vec3> points, std::size_t m) {
  const auto n = points.size();
  if (m > n) {
    throw InvalidArgument("farthest point sampling: m = " + std::to_string(m) + " exceeds " +
                          std::to_string(n) + " points");
  }
  std::vector<std::size_t> picks;
  if (m == 0) return picks;
  picks.reserve(m);

  Vec3 centroid = Vec3::Zero();
  for (const auto& p : points) centroid += p;
  centroid /= static_cast<double>(n);
  std::size_t first = 0;
  double far = -1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = (points[i] - centroid).squaredNorm();
    if (d > far) {
      far = d;
      first = i;
    }
  }

  std::vector<double> mind(n);
  for (std::size_t i = 0; i < n; ++i) mind[i] = (points[i] - points[first]).squaredNorm();
  mind[first] = -1.0;
  picks.push_back(first);

  FpsGrid grid(points, mind);
  grid.refresh_all();
  while (picks.size() < m) {
    const auto next = grid.argmax();
    mind[next] = -1.0;
    picks.push_back(next);
    grid.update(next);
  }
  return picks;
}

PointCloudFrame fuse_and_sample(const std::vector<PointCloudFrame>& views, std::size_t m) {
  PointCloudFrame fused;
  std::size_t total = 0;
  for (const auto& v : views) total += v.size();
  if (total == 0) throw InvalidArgument("fuse_and_sample: all views are empty");
  fused.reserve(total);
  for (const auto& v : views) {
    for (std::size_t i = 0; i < v.size(); ++i) fused.append_from(v, i);
  }
  const auto picks = farthest_point_sampling(fused.xyz, m);
  PointCloudFrame out;
  out.reserve(m);
  for (const auto i : picks) out.append_from(fused, i);
  out.state_index = views.front().state_index;
  return out;
}

std::vector<CameraPose> capture_cameras(const ArticulatedModel& model,
                                        const CaptureSettings& settings) {
  const double radius = model.bounding_radius();
  const double distance = settings.radius_factor * radius;
  const auto k =
      CameraIntrinsics::enclosing(settings.resolution, settings.resolution, radius, distance);
  return camera_positions(distance, settings.views, k);
}

PointCloudFrame capture_state(const ArticulatedModel& model, const JointConfig& q,
                              const std::vector<CameraPose>& cameras, std::size_t points) {
  std::vector<PointCloudFrame> views;
  views.reserve(cameras.size());
  for (const auto& cam : cameras) views.push_back(backproject(render(model, q, cam), cam));
  return fuse_and_sample(views, points);
}

}  // namespace artic
