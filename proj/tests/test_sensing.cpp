#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "artic/errors.hpp"
#include "artic/kinematics.hpp"
#include "artic/sensing.hpp"
#include "support.hpp"

using namespace artic;

namespace {

ArticulatedModel unit_box() {
  ArticulatedModel m;
  m.parts.push_back(testing_support::part(0, SemanticClass::Body, {{-0.5, -0.5, -0.5}, {0.5, 0.5, 0.5}}));
  return m;
}

CameraPose camera_on_z(double r, int res) {
  CameraPose c;
  c.position = Vec3(0, 0, r);
  c.up = Vec3::UnitY();
  c.intrinsics = CameraIntrinsics::enclosing(res, res, 1.0, r);
  return c;
}

// Greedy FPS by direct recomputation of every candidate's distance to the picked set.
std::vector<std::size_t> greedy_oracle(const std::vector<Vec3>& pts, std::size_t m) {
  Vec3 c = Vec3::Zero();
  for (const auto& p : pts) c += p;
  c /= static_cast<double>(pts.size());
  std::vector<std::size_t> picked;
  std::size_t first = 0;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if ((pts[i] - c).squaredNorm() > (pts[first] - c).squaredNorm()) first = i;
  }
  picked.push_back(first);
  while (picked.size() < m) {
    double best = -1;
    std::size_t arg = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      double d = 1e300;
      for (auto j : picked) d = std::min(d, (pts[i] - pts[j]).squaredNorm());
      if (d > best) {
        best = d;
        arg = i;
      }
    }
    picked.push_back(arg);
  }
  return picked;
}

}  // namespace

TEST(Cameras, PoleAndRadius) {
  EXPECT_LE((sphere_position(2.0, 0.0, 1.3) - Vec3(0, 0, 2.0)).norm(), 1e-12);
  for (int count : {1, 5, 18, 40}) {
    for (const auto& c : camera_positions(3.0, count)) {
      EXPECT_NEAR(c.position.norm(), 3.0, 1e-9);
      EXPECT_EQ(c.look_at, Vec3::Zero());
      const Mat3 b = c.basis();
      EXPECT_LE((b.transpose() * b - Mat3::Identity()).cwiseAbs().maxCoeff(), 1e-9);
    }
  }
}

TEST(Cameras, NearUniformSpacing) {
  const auto cams = camera_positions(1.0, 18);
  double lo = 1e9, hi = 0;
  for (std::size_t i = 0; i < cams.size(); ++i) {
    double nearest = 1e9;
    for (std::size_t j = 0; j < cams.size(); ++j) {
      if (i == j) continue;
      const double cosang = std::clamp(cams[i].position.dot(cams[j].position), -1.0, 1.0);
      nearest = std::min(nearest, std::acos(cosang));
    }
    lo = std::min(lo, nearest);
    hi = std::max(hi, nearest);
  }
  EXPECT_LE(hi / lo, 2.0);
}

TEST(Render, CenterPixelDepthOfUnitBox) {
  const double r = 3.0;
  const auto cam = camera_on_z(r, 65);
  const auto img = render(unit_box(), JointConfig{}, cam);
  const auto k = img.index(32, 32);
  ASSERT_TRUE(img.valid[k]);
  EXPECT_NEAR(img.depth[k], r - 0.5, 1e-6);
}

TEST(Render, EmptyModelAllInvalid) {
  ArticulatedModel empty;
  const auto img = render(empty, JointConfig{}, camera_on_z(2.0, 17));
  EXPECT_TRUE(std::none_of(img.valid.begin(), img.valid.end(), [](auto v) { return v != 0; }));
  EXPECT_EQ(backproject(img, camera_on_z(2.0, 17)).size(), 0u);
}

TEST(Render, LabelsMatchContainingBox) {
  const auto m = testing_support::door_model();
  const JointConfig q{{0.7}};
  for (const auto& cam : capture_cameras(m, {6, 33, 100, 2.5})) {
    const auto img = render(m, q, cam);
    const auto cloud = backproject(img, cam);
    for (std::size_t i = 0; i < cloud.size(); ++i) {
      const auto& part = m.parts[cloud.instance[i]];
      const Vec3 local = part_pose(m, part.id, q).inverse().apply(cloud.xyz[i]);
      EXPECT_TRUE(part.boxes[0].contains(local, 1e-6));
      EXPECT_EQ(cloud.semantic[i], part.semantic);
    }
  }
}

TEST(Backproject, PrincipalRayAndReprojection) {
  const auto m = testing_support::door_model();
  const auto cams = camera_positions(3.0, 4, CameraIntrinsics::enclosing(31, 31, 1.2, 3.0));
  for (const auto& cam : cams) {
    const auto img = render(m, JointConfig{{0.4}}, cam);
    const auto k = img.index(15, 15);
    if (img.valid[k]) {
      const Vec3 axis = (cam.look_at - cam.position).normalized();
      const auto cloud = backproject(img, cam);
      std::size_t before = 0;
      for (std::size_t i = 0; i < k; ++i) before += img.valid[i];
      EXPECT_LE((cloud.xyz[before] - (cam.position + img.depth[k] * axis)).norm(), 1e-9);
    }
    std::size_t idx = 0;
    const auto cloud = backproject(img, cam);
    EXPECT_EQ(cloud.size(), static_cast<std::size_t>(std::count(img.valid.begin(), img.valid.end(), 1)));
    for (int v = 0; v < img.height; ++v) {
      for (int u = 0; u < img.width; ++u) {
        if (!img.valid[img.index(u, v)]) continue;
        double pu, pv;
        ASSERT_TRUE(cam.project(cloud.xyz[idx++], pu, pv));
        EXPECT_LE(std::abs(pu - u), 0.5);
        EXPECT_LE(std::abs(pv - v), 0.5);
      }
    }
  }
}

TEST(Fps, MatchesGreedyOracle) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Vec3> pts(24);
    for (auto& p : pts) p = Vec3(u(rng), u(rng), u(rng));
    EXPECT_EQ(farthest_point_sampling(pts, 8), greedy_oracle(pts, 8));
  }
}

TEST(Fps, LargeCloudMatchesOracle) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<Vec3> pts(3000);
  for (auto& p : pts) p = Vec3(u(rng), 0.3 * u(rng), u(rng) * u(rng));
  EXPECT_EQ(farthest_point_sampling(pts, 60), greedy_oracle(pts, 60));
}

TEST(Fps, SegmentEndpointsAndMonotonicity) {
  std::vector<Vec3> line;
  for (int i = 0; i < 11; ++i) line.emplace_back(0.1 * i, 0.2 * i, 0.0);
  const auto two = farthest_point_sampling(line, 2);
  EXPECT_EQ(std::set<std::size_t>(two.begin(), two.end()), (std::set<std::size_t>{0, 10}));

  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<Vec3> pts(200);
  for (auto& p : pts) p = Vec3(u(rng), u(rng), u(rng));
  const auto order = farthest_point_sampling(pts, 50);
  EXPECT_EQ(std::set<std::size_t>(order.begin(), order.end()).size(), 50u);
  double prev = 1e9;
  for (std::size_t k = 2; k <= order.size(); ++k) {
    double mind = 1e9;
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = a + 1; b < k; ++b) mind = std::min(mind, (pts[order[a]] - pts[order[b]]).norm());
    EXPECT_LE(mind, prev);
    prev = mind;
  }
}

TEST(Fuse, IdentityAndErrors) {
  PointCloudFrame view;
  for (int i = 0; i < 9; ++i) view.push_back(Vec3(i, i * i, 1), Vec3::Constant(0.2), SemanticClass::Body, 0);
  const auto all = fuse_and_sample({view}, 9);
  ASSERT_EQ(all.size(), 9u);
  std::set<double> xs;
  for (const auto& p : all.xyz) xs.insert(p.x());
  EXPECT_EQ(xs.size(), 9u);
  EXPECT_THROW(fuse_and_sample({view}, 10), InvalidArgument);
  EXPECT_THROW(fuse_and_sample({}, 1), InvalidArgument);
}

TEST(Fuse, ViewOrderDoesNotChangeSelection) {
  const auto m = testing_support::door_model();
  const auto cams = capture_cameras(m, {5, 24, 100, 2.5});
  std::vector<PointCloudFrame> views;
  for (const auto& c : cams) views.push_back(backproject(render(m, JointConfig{{1.0}}, c), c));
  auto key = [](const PointCloudFrame& f) {
    std::set<std::tuple<double, double, double>> s;
    for (const auto& p : f.xyz) s.insert({p.x(), p.y(), p.z()});
    return s;
  };
  const auto a = fuse_and_sample(views, 200);
  std::reverse(views.begin(), views.end());
  const auto b = fuse_and_sample(views, 200);
  EXPECT_EQ(key(a), key(b));
}

TEST(Capture, DeterministicAcrossThreadCounts) {
  const auto m = testing_support::door_model();
  const auto cams = capture_cameras(m, {6, 40, 300, 2.5});
  const auto a = capture_state(m, JointConfig{{0.3}}, cams, 300);
  const auto b = capture_state(m, JointConfig{{0.3}}, cams, 300);
  EXPECT_EQ(a.xyz, b.xyz);
  EXPECT_EQ(a.instance, b.instance);
}
