#include <gtest/gtest.h>

#include <Eigen/Geometry>

#include "artic/errors.hpp"
#include "artic/kinematics.hpp"
#include "support.hpp"

using namespace artic;
using testing_support::door_model;
using testing_support::sample_surface;

namespace {

constexpr double kTol = 1e-9;

Mat4 axis_angle_matrix(const Vec3& axis, double angle, const Vec3& anchor) {
  Mat4 to = Mat4::Identity(), back = Mat4::Identity(), rot = Mat4::Identity();
  to.topRightCorner<3, 1>() = -anchor;
  back.topRightCorner<3, 1>() = anchor;
  rot.topLeftCorner<3, 3>() = Eigen::AngleAxisd(angle, axis.normalized()).toRotationMatrix();
  return back * rot * to;
}

Mat4 translation_matrix(const Vec3& t) {
  Mat4 m = Mat4::Identity();
  m.topRightCorner<3, 1>() = t;
  return m;
}

ArticulatedModel chain_model() {
  using testing_support::part;
  ArticulatedModel m;
  m.parts.push_back(part(0, SemanticClass::Body, {{-1, -1, -1}, {1, 1, 1}}));
  m.parts.push_back(part(1, SemanticClass::HingedDoor, {{1, 0, 0}, {1.1, 1, 1}}));
  m.parts.push_back(part(2, SemanticClass::Drawer, {{1.1, 0.2, 0.2}, {1.3, 0.4, 0.4}}));
  m.joints.push_back(testing_support::revolute(0, 0, 1, Vec3(0.2, 0.3, 1.0), Vec3(1, 0.1, -0.2), -1.0, 1.0));
  m.joints.push_back(testing_support::prismatic(1, 1, 2, Vec3(0.6, -0.8, 0.0), 0.0, 0.5));
  return m;
}

}  // namespace

TEST(JointTransform, RevoluteZeroIsIdentity) {
  for (const Vec3 axis : {Vec3(1, 2, 3), Vec3(0, 0, 1), Vec3(-1, 0.5, 0)}) {
    Joint j = testing_support::revolute(0, 0, 1, axis, Vec3(0.3, -2, 5), -1, 1);
    const auto t = joint_transform(j, 0.0);
    EXPECT_LE((t.matrix() - Mat4::Identity()).cwiseAbs().maxCoeff(), kTol);
  }
}

TEST(JointTransform, PrismaticIsTranslation) {
  Joint j = testing_support::prismatic(0, 0, 1, Vec3::UnitZ(), 0, 1);
  const auto t = joint_transform(j, 0.3);
  EXPECT_LE((t.rotation - Mat3::Identity()).cwiseAbs().maxCoeff(), kTol);
  EXPECT_LE((t.translation - Vec3(0, 0, 0.3)).norm(), kTol);
}

TEST(JointTransform, QuarterTurn) {
  Joint j = testing_support::revolute(0, 0, 1, Vec3::UnitZ(), Vec3::Zero(), 0, M_PI);
  EXPECT_LE((joint_transform(j, M_PI / 2).apply(Vec3(1, 0, 0)) - Vec3(0, 1, 0)).norm(), kTol);
}

TEST(JointTransform, OutsideLimitsNamesJoint) {
  Joint j = testing_support::revolute(7, 0, 1, Vec3::UnitZ(), Vec3::Zero(), 0, 1);
  try {
    joint_transform(j, 1.5);
    FAIL() << "expected LimitViolation";
  } catch (const LimitViolation& e) {
    EXPECT_EQ(e.joint_id(), 7);
    EXPECT_NE(std::string(e.what()).find("7"), std::string::npos);
  }
}

TEST(RigidTransform, InverseAndOrthonormality) {
  const auto t = rotation_about(Vec3(1, -2, 0.5), 0.77, Vec3(0.4, 0.1, -3));
  EXPECT_LE((t.rotation.transpose() * t.rotation - Mat3::Identity()).cwiseAbs().maxCoeff(), kTol);
  EXPECT_NEAR(t.rotation.determinant(), 1.0, kTol);
  EXPECT_LE(((t * t.inverse()).matrix() - Mat4::Identity()).cwiseAbs().maxCoeff(), kTol);
}

TEST(PartPose, RootIsIdentity) {
  const auto m = door_model();
  const auto t = part_pose(m, 0, JointConfig{{1.2}});
  EXPECT_LE((t.matrix() - Mat4::Identity()).cwiseAbs().maxCoeff(), kTol);
}

TEST(PartPose, SingleJointEqualsJointTransform) {
  const auto m = door_model();
  const auto a = part_pose(m, 1, JointConfig{{0.9}}).matrix();
  const auto b = joint_transform(m.joints[0], 0.9).matrix();
  EXPECT_LE((a - b).cwiseAbs().maxCoeff(), kTol);
}

TEST(PartPose, TwoJointChainMatchesMatrixProduct) {
  const auto m = chain_model();
  for (double q0 : {-0.7, 0.0, 0.4}) {
    for (double q1 : {0.0, 0.25, 0.5}) {
      const Mat4 oracle = axis_angle_matrix(m.joints[0].axis, q0, m.joints[0].anchor) *
                          translation_matrix(q1 * m.joints[1].axis);
      const auto got = part_pose(m, 2, JointConfig{{q0, q1}}).matrix();
      EXPECT_LE((got - oracle).cwiseAbs().maxCoeff(), kTol);
    }
  }
}

TEST(PartPose, UnknownPartThrows) {
  EXPECT_THROW(part_pose(door_model(), 5, JointConfig{{0.1}}), InvalidArgument);
}

TEST(CanonicalMap, IdentityCases) {
  const auto m = door_model();
  const Vec3 x(0.2, 0.7, -0.1);
  EXPECT_LE((canonical_map(m, 1, JointConfig{{0.3}}, JointConfig{{0.3}}, x) - x).norm(), kTol);
  EXPECT_LE((canonical_map(m, 0, JointConfig{{0.1}}, JointConfig{{1.4}}, x) - x).norm(), kTol);
}

TEST(CanonicalMap, DoorNinetyToFortyFive) {
  const auto m = door_model();
  const Vec3 hinge = m.joints[0].anchor;
  const Vec3 x(0.3, 0.9, 0.2);
  const Vec3 oracle = hinge + Eigen::AngleAxisd(-M_PI / 4, Vec3::UnitZ()) * (x - hinge);
  const Vec3 got = canonical_map(m, 1, JointConfig{{M_PI / 2}}, JointConfig{{M_PI / 4}}, x);
  EXPECT_LE((got - oracle).norm(), kTol);
}

TEST(CanonicalMap, MaterialPointRoundTrip) {
  const auto m = chain_model();
  const Vec3 local(1.2, 0.3, 0.25);
  const JointConfig qt{{0.6, 0.1}}, qc{{-0.2, 0.45}};
  const Vec3 at_t = part_pose(m, 2, qt).apply(local);
  const Vec3 at_c = part_pose(m, 2, qc).apply(local);
  EXPECT_LE((canonical_map(m, 2, qt, qc, at_t) - at_c).norm(), kTol);
}

TEST(CanonicalConfig, Midpoints) {
  auto m = chain_model();
  m.joints[0].lower = 0.0;
  m.joints[0].upper = M_PI / 2;
  m.joints[1].lower = 0.1;
  m.joints[1].upper = 0.5;
  auto q = canonical_config(m);
  EXPECT_NEAR(q[0], M_PI / 4, kTol);
  EXPECT_NEAR(q[1], 0.3, kTol);
  m.joints[0].lower = -0.8;
  m.joints[0].upper = 0.8;
  EXPECT_NEAR(canonical_config(m)[0], 0.0, kTol);
}

TEST(CheckConfig, RejectsWrongSizeAndRange) {
  const auto m = door_model();
  EXPECT_THROW(check_config(m, JointConfig{{0.1, 0.2}}), InvalidArgument);
  EXPECT_THROW(check_config(m, JointConfig{{-0.1}}), LimitViolation);
  EXPECT_NO_THROW(check_config(m, JointConfig{{0.5}}));
}

TEST(GtOffsets, SingleFrameAtCanonicalPointsToCentroid) {
  const auto m = door_model();
  const JointConfig qc = canonical_config(m);
  SequenceSample s;
  s.frames.push_back(sample_surface(m, qc, 50, 1));
  const auto field = gt_offsets(s, m, {qc}, qc, TargetMode::Canonical);
  Vec3 centroid = Vec3::Zero();
  int n = 0;
  for (std::size_t i = 0; i < s.frames[0].size(); ++i) {
    if (s.frames[0].instance[i] == 1) {
      centroid += s.frames[0].xyz[i];
      ++n;
    }
  }
  centroid /= n;
  for (std::size_t i = 0; i < field.size(); ++i) {
    const bool thing = s.frames[0].instance[i] == 1;
    EXPECT_EQ(field.mask[i], thing ? 1 : 0);
    if (thing) {
      EXPECT_LE((s.frames[0].xyz[i] + field.target[i] - centroid).norm(), kTol);
    } else {
      EXPECT_EQ(field.target[i], Vec3::Zero());
    }
  }
}

TEST(GtOffsets, CanonicalTargetsCoincideCentroid4DLiesBetween) {
  const auto m = door_model();
  const JointConfig closed{{0.0}}, open{{M_PI / 2}}, qc = canonical_config(m);
  SequenceSample s;
  s.frames.push_back(sample_surface(m, closed, 40, 3));
  s.frames.push_back(sample_surface(m, open, 40, 3));
  const std::size_t n = s.frames[0].size();

  // Brute-force centroids.
  Vec3 c_closed = Vec3::Zero(), c_open = Vec3::Zero(), c_canon = Vec3::Zero();
  int cnt = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (s.frames[0].instance[i] != 1) continue;
    c_closed += s.frames[0].xyz[i];
    c_open += s.frames[1].xyz[i];
    c_canon += canonical_map(m, 1, closed, qc, s.frames[0].xyz[i]);
    c_canon += canonical_map(m, 1, open, qc, s.frames[1].xyz[i]);
    ++cnt;
  }
  c_closed /= cnt;
  c_open /= cnt;
  c_canon /= 2 * cnt;

  const auto canon = gt_offsets(s, m, {closed, open}, qc, TargetMode::Canonical);
  const auto c4d = gt_offsets(s, m, {closed, open}, qc, TargetMode::Centroid4D);
  for (std::size_t f = 0; f < 2; ++f) {
    for (std::size_t i = 0; i < n; ++i) {
      if (s.frames[f].instance[i] != 1) continue;
      const auto k = f * n + i;
      EXPECT_LE((s.frames[f].xyz[i] + canon.target[k] - c_canon).norm(), kTol);
      EXPECT_LE((s.frames[f].xyz[i] + c4d.target[k] - 0.5 * (c_closed + c_open)).norm(), kTol);
    }
  }
}

TEST(GtOffsets, CanonicalTargetIsArticulationInvariant) {
  const auto m = door_model();
  const JointConfig qc = canonical_config(m);
  const std::vector<JointConfig> states = {JointConfig{{0.1}}, JointConfig{{0.8}}, JointConfig{{1.5}}};
  auto target_from = [&](const std::vector<int>& idx, TargetMode mode) {
    SequenceSample s;
    std::vector<JointConfig> q;
    for (int i : idx) {
      s.frames.push_back(sample_surface(m, states[i], 60, 11));  // same local samples each state
      q.push_back(states[i]);
    }
    return part_targets(s, m, q, qc, mode)[1];
  };
  const Vec3 all = target_from({0, 1, 2}, TargetMode::Canonical);
  EXPECT_LE((target_from({0}, TargetMode::Canonical) - all).norm(), 1e-6);
  EXPECT_LE((target_from({2, 1}, TargetMode::Canonical) - all).norm(), 1e-6);
  EXPECT_GT((target_from({0}, TargetMode::Centroid4D) - target_from({2}, TargetMode::Centroid4D)).norm(), 1e-3);
}

TEST(GtOffsets, FrameStateMismatchThrows) {
  const auto m = door_model();
  SequenceSample s;
  s.frames.push_back(sample_surface(m, JointConfig{{0.0}}, 10, 1));
  EXPECT_THROW(gt_offsets(s, m, {}, canonical_config(m), TargetMode::Canonical), InvalidArgument);
}

TEST(GtOffsets, MissingPartIsSkipped) {
  const auto m = door_model();
  SequenceSample s;
  PointCloudFrame f;
  f.push_back(Vec3(0, 0, 0.5), Vec3::Constant(0.5), SemanticClass::Body, 0);
  s.frames.push_back(f);
  std::vector<int> skipped;
  const auto field = gt_offsets(s, m, {JointConfig{{0.0}}}, canonical_config(m), TargetMode::Canonical, &skipped);
  EXPECT_EQ(skipped, std::vector<int>{1});
  EXPECT_EQ(field.mask[0], 0);
}
