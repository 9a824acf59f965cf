#include <gtest/gtest.h>

#include <cmath>

#include "artic/errors.hpp"
#include "artic/trajectory.hpp"

using namespace artic;

namespace {
constexpr double kTol = 1e-9;

TrajectoryProfile profile(ProfileKind kind, double a, bool inverted, double q0 = 0.2, double qf = 1.4,
                          double T = 2.0) {
  TrajectoryProfile p;
  p.kind = kind;
  p.exponent = a;
  p.inverted = inverted;
  p.q0 = q0;
  p.qf = qf;
  p.duration = T;
  return p;
}
}  // namespace

TEST(Trajectory, PowerLinearMidpoint) {
  const auto p = profile(ProfileKind::Power, 1.0, false);
  EXPECT_NEAR(eval(p, 1.0), 0.5 * (0.2 + 1.4), kTol);
}

TEST(Trajectory, PowerQuadraticMidpoint) {
  const auto p = profile(ProfileKind::Power, 2.0, false);
  EXPECT_NEAR(eval(p, 1.0), 0.2 + 0.25 * 1.2, kTol);
}

TEST(Trajectory, SigmoidMidpoint) {
  const auto p = profile(ProfileKind::Sigmoid, 1.0, false);
  EXPECT_NEAR(eval(p, 1.0), 0.5 * (0.2 + 1.4), kTol);
}

TEST(Trajectory, SigmoidBoundaryValue) {
  const auto p = profile(ProfileKind::Sigmoid, 1.0, false, 0.0, 1.0, 1.0);
  EXPECT_NEAR(eval(p, 0.0), 1.0 / (1.0 + std::exp(6.0)), 1e-12);
  EXPECT_NEAR(eval(p, 0.0), 2.4726e-3, 1e-7);
}

TEST(Trajectory, InvertedStartsAtFinal) {
  EXPECT_NEAR(eval(profile(ProfileKind::Power, 0.5, true), 0.0), 1.4, kTol);
  EXPECT_NEAR(eval(profile(ProfileKind::Power, 0.5, true), 2.0), 0.2, kTol);
}

TEST(Trajectory, EndpointsWithinTolerance) {
  for (double a : {0.5, 1.0, 2.0}) {
    const auto p = profile(ProfileKind::Power, a, false);
    EXPECT_NEAR(eval(p, 0.0), p.q0, kTol);
    EXPECT_NEAR(eval(p, p.duration), p.qf, kTol);
  }
  const auto s = profile(ProfileKind::Sigmoid, 1.0, false);
  EXPECT_NEAR(eval(s, 0.0), s.q0, 3e-3 * std::abs(s.qf - s.q0));
  EXPECT_NEAR(eval(s, s.duration), s.qf, 3e-3 * std::abs(s.qf - s.q0));
}

TEST(Trajectory, MirrorMonotoneAndBounded) {
  for (auto kind : {ProfileKind::Power, ProfileKind::Sigmoid}) {
    for (double a : {0.5, 1.0, 2.0}) {
      const auto p = profile(kind, a, false);
      const auto inv = profile(kind, a, true);
      double prev = -1e9;
      for (int i = 0; i <= 200; ++i) {
        const double t = p.duration * i / 200.0;
        const double v = eval(p, t);
        EXPECT_EQ(eval(inv, t), eval(p, p.duration - t));
        EXPECT_GE(v, p.q0 - kTol);
        EXPECT_LE(v, p.qf + kTol);
        if (i > 0) EXPECT_GT(v, prev);
        prev = v;
      }
    }
  }
}

TEST(Trajectory, OutsideDomainThrows) {
  const auto p = profile(ProfileKind::Power, 1.0, false);
  EXPECT_THROW(eval(p, -0.01), InvalidArgument);
  EXPECT_THROW(eval(p, 2.01), InvalidArgument);
}

TEST(SampleStates, ThreeStatesAtZeroHalfEnd) {
  const auto p = profile(ProfileKind::Power, 1.0, false);
  const auto q = sample_states({p}, 3);
  ASSERT_EQ(q.size(), 3u);
  EXPECT_NEAR(q[0][0], eval(p, 0.0), kTol);
  EXPECT_NEAR(q[1][0], eval(p, 1.0), kTol);
  EXPECT_NEAR(q[2][0], eval(p, 2.0), kTol);
}

TEST(SampleStates, HundredStatesEndpoints) {
  const auto p = profile(ProfileKind::Power, 2.0, false);
  const auto q = sample_states({p}, 100);
  ASSERT_EQ(q.size(), 100u);
  EXPECT_NEAR(q.front()[0], p.q0, kTol);
  EXPECT_NEAR(q.back()[0], p.qf, kTol);
}

TEST(SampleStates, PerJointProfiles) {
  const auto a = profile(ProfileKind::Power, 0.5, false);
  const auto b = profile(ProfileKind::Sigmoid, 1.0, true, -0.3, 0.9);
  const int n = 17;
  const auto q = sample_states({a, b}, n);
  for (int i = 0; i < n; ++i) {
    const double t = i * 2.0 / (n - 1);
    EXPECT_NEAR(q[i][0], eval(a, t), kTol);
    EXPECT_NEAR(q[i][1], eval(b, t), kTol);
  }
}

TEST(SampleStates, Errors) {
  const auto a = profile(ProfileKind::Power, 1.0, false);
  EXPECT_THROW(sample_states({a}, 1), InvalidArgument);
  auto b = a;
  b.duration = 3.0;
  EXPECT_THROW(sample_states({a, b}, 5), InvalidArgument);
}

TEST(Profile, InvalidParametersRejected) {
  auto p = profile(ProfileKind::Power, 0.0, false);
  EXPECT_THROW(p.check(), InvalidArgument);
  p = profile(ProfileKind::Power, 1.0, false, 0, 1, 0.0);
  EXPECT_THROW(p.check(), InvalidArgument);
}
