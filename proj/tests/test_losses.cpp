#include <gtest/gtest.h>

#include <random>

#include "artic/errors.hpp"
#include "artic/losses.hpp"
#include "support.hpp"

using namespace artic;
using testing_support::rel_err;

namespace {

std::mt19937_64 rng(1234);

double uni(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

Vec3 rand_vec(double scale = 1.0) { return Vec3(uni(-scale, scale), uni(-scale, scale), uni(-scale, scale)); }

ClassMatrix random_probs(int n, int k) {
  ClassMatrix logits(n, k);
  for (int i = 0; i < n; ++i)
    for (int c = 0; c < k; ++c) logits(i, c) = uni(-2, 2);
  return softmax(logits);
}

double iou_oracle(const std::vector<int>& pred, const std::vector<int>& gt) {
  int inter = 0, uni_count = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    inter += pred[i] && gt[i];
    uni_count += pred[i] || gt[i];
  }
  return uni_count == 0 ? 1.0 : static_cast<double>(inter) / uni_count;
}

}  // namespace

TEST(LDist, Values) {
  EXPECT_EQ(l_dist(Vec3(1, 2, 3), Vec3(1, 2, 3)), 0.0);
  EXPECT_DOUBLE_EQ(l_dist(Vec3(1, 2, 3), Vec3::Zero()), 6.0);
}

TEST(LAngle, Values) {
  const Vec3 o(0.3, -1, 2);
  EXPECT_NEAR(l_angle(2 * o, o), 0.0, 1e-12);
  EXPECT_NEAR(l_angle(-o, o), 2.0, 1e-12);
  EXPECT_NEAR(l_angle(Vec3(1, 0, 0), Vec3(0, 1, 0)), 1.0, 1e-12);
  Vec3 g;
  EXPECT_EQ(l_angle(Vec3(1e-9, 0, 0), o, &g), 0.0);
  EXPECT_EQ(g, Vec3::Zero());
  for (double lambda : {0.01, 0.5, 7.0}) {
    const Vec3 p = rand_vec();
    EXPECT_NEAR(l_angle(lambda * p, o), l_angle(p, o), 1e-12);
  }
}

TEST(LDist, GradientMatchesFiniteDifferences) {
  for (int trial = 0; trial < 100; ++trial) {
    Vec3 p = rand_vec(), t = rand_vec(), g;
    l_dist(p, t, &g);
    for (int d = 0; d < 3; ++d) {
      if (std::abs(p[d] - t[d]) < 1e-3) continue;
      const double fd = testing_support::central_diff(
          [&](double x) { Vec3 q = p; q[d] = x; return l_dist(q, t); }, p[d]);
      EXPECT_LE(rel_err(g[d], fd), 1e-4);
    }
  }
}

TEST(LAngle, GradientMatchesFiniteDifferences) {
  for (int trial = 0; trial < 100; ++trial) {
    Vec3 p = rand_vec(), t = rand_vec(), g;
    l_angle(p, t, &g);
    for (int d = 0; d < 3; ++d) {
      const double fd = testing_support::central_diff(
          [&](double x) { Vec3 q = p; q[d] = x; return l_angle(q, t); }, p[d]);
      EXPECT_LE(rel_err(g[d], fd, 1e-8), 1e-4);
    }
  }
}

TEST(LCanon, HandValues) {
  OffsetField f;
  f.resize(1, 2);
  EXPECT_EQ(l_canon(f), 0.0);  // all-zero mask
  f.predicted[0] = Vec3(5, 0, 0);
  f.target[0] = Vec3(0, 1, 0);  // l_dist 6, l_angle 1
  f.mask[0] = 1;
  f.predicted[1] = Vec3(5, 5, 5);  // masked out
  EXPECT_DOUBLE_EQ(l_canon(f), 3.5);
  CanonLossOptions by_mask;
  by_mask.normalize_by_mask = true;
  EXPECT_DOUBLE_EQ(l_canon(f, nullptr, by_mask), 7.0);
}

TEST(LCanon, PerfectPredictionsAndMaskedPoints) {
  OffsetField f;
  f.resize(2, 5);
  for (std::size_t i = 0; i < f.size(); ++i) {
    f.target[i] = rand_vec();
    f.predicted[i] = f.target[i];
    f.mask[i] = i % 2;
  }
  EXPECT_NEAR(l_canon(f), 0.0, 1e-12);
  const double before = l_canon(f);
  for (std::size_t i = 0; i < f.size(); i += 2) f.predicted[i] = rand_vec(5);
  EXPECT_EQ(l_canon(f), before);
}

TEST(LCanon, PermutationInvariantWithinFrame) {
  OffsetField f;
  f.resize(1, 12);
  for (std::size_t i = 0; i < f.size(); ++i) {
    f.target[i] = rand_vec();
    f.predicted[i] = rand_vec();
    f.mask[i] = i % 3 != 0;
  }
  OffsetField g = f;
  std::reverse(g.target.begin(), g.target.end());
  std::reverse(g.predicted.begin(), g.predicted.end());
  std::reverse(g.mask.begin(), g.mask.end());
  EXPECT_NEAR(l_canon(f), l_canon(g), 1e-12);
}

TEST(LCanon, GradientMatchesFiniteDifferences) {
  OffsetField f;
  f.resize(3, 8);
  for (std::size_t i = 0; i < f.size(); ++i) {
    f.target[i] = rand_vec();
    f.predicted[i] = rand_vec();
    f.mask[i] = i % 4 != 0;
  }
  std::vector<Vec3> g;
  l_canon(f, &g);
  for (std::size_t i = 0; i < f.size(); ++i) {
    for (int d = 0; d < 3; ++d) {
      if (std::abs(f.predicted[i][d] - f.target[i][d]) < 1e-3) continue;
      const double fd = testing_support::central_diff(
          [&](double x) { OffsetField h = f; h.predicted[i][d] = x; return l_canon(h); },
          f.predicted[i][d]);
      if (f.mask[i]) {
        EXPECT_LE(rel_err(g[i][d], fd, 1e-8), 1e-4);
      } else {
        EXPECT_EQ(g[i][d], 0.0);
      }
    }
  }
}

TEST(Lovasz, OneHotCorrectIsZero) {
  ClassMatrix p = ClassMatrix::Zero(5, 3);
  std::vector<int> y = {0, 2, 1, 1, 0};
  for (int i = 0; i < 5; ++i) p(i, y[i]) = 1.0;
  EXPECT_EQ(lovasz_softmax(p, y), 0.0);
}

TEST(Lovasz, UniformSinglePoint) {
  ClassMatrix p = ClassMatrix::Constant(1, 6, 1.0 / 6.0);
  EXPECT_NEAR(lovasz_softmax(p, std::vector<int>{3}), 5.0 / 6.0, 1e-12);
}

TEST(Lovasz, ExhaustiveBinaryJaccard) {
  for (int gt_bits = 0; gt_bits < 64; ++gt_bits) {
    for (int pred_bits = 0; pred_bits < 64; ++pred_bits) {
      std::vector<int> gt(6), pred(6);
      ClassMatrix p(6, 2);
      for (int i = 0; i < 6; ++i) {
        gt[i] = (gt_bits >> i) & 1;
        pred[i] = (pred_bits >> i) & 1;
        p(i, 1) = pred[i];
        p(i, 0) = 1 - pred[i];
      }
      // Class 1 only: the binary Jaccard loss of the foreground.
      const std::vector<int> fg = {1};
      const double got = lovasz_softmax(p, gt, nullptr, &fg);
      std::vector<int> gt1(6), pr1(6);
      for (int i = 0; i < 6; ++i) {
        gt1[i] = gt[i] == 1;
        pr1[i] = pred[i] == 1;
      }
      EXPECT_NEAR(got, 1.0 - iou_oracle(pr1, gt1), 1e-12) << gt_bits << " " << pred_bits;
    }
  }
}

TEST(Lovasz, BoundedAndZeroIffPerfect) {
  for (int trial = 0; trial < 50; ++trial) {
    const auto p = random_probs(10, 4);
    std::vector<int> y(10);
    for (auto& v : y) v = static_cast<int>(uni(0, 4));
    const double l = lovasz_softmax(p, y);
    EXPECT_GE(l, 0.0);
    EXPECT_LE(l, 1.0);
    EXPECT_GT(l, 0.0);
  }
}

TEST(Lovasz, GradientMatchesFiniteDifferences) {
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = random_probs(9, 6);
    std::vector<int> y(9);
    for (auto& v : y) v = static_cast<int>(uni(0, 6));
    ClassMatrix g;
    lovasz_softmax(p, y, &g);
    for (int i = 0; i < 9; ++i) {
      for (int c = 0; c < 6; ++c) {
        const double fd = testing_support::central_diff(
            [&](double x) { ClassMatrix q = p; q(i, c) = x; return lovasz_softmax(q, y); }, p(i, c));
        EXPECT_LE(rel_err(g(i, c), fd, 1e-8), 1e-4);
      }
    }
  }
}

TEST(Lovasz, EmptyInputThrows) {
  EXPECT_THROW(lovasz_softmax(ClassMatrix(0, 6), std::vector<int>{}), InvalidArgument);
}

TEST(Softmax, BackwardMatchesFiniteDifferences) {
  ClassMatrix logits(4, 6);
  for (int i = 0; i < 4; ++i)
    for (int c = 0; c < 6; ++c) logits(i, c) = uni(-2, 2);
  ClassMatrix w(4, 6);
  for (int i = 0; i < 4; ++i)
    for (int c = 0; c < 6; ++c) w(i, c) = uni(-1, 1);
  auto f = [&](const ClassMatrix& z) { return softmax(z).cwiseProduct(w).sum(); };
  const ClassMatrix g = softmax_backward(softmax(logits), w);
  for (int i = 0; i < 4; ++i) {
    for (int c = 0; c < 6; ++c) {
      const double fd = testing_support::central_diff(
          [&](double x) { ClassMatrix z = logits; z(i, c) = x; return f(z); }, logits(i, c));
      EXPECT_LE(rel_err(g(i, c), fd, 1e-8), 1e-4);
    }
  }
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(softmax(logits).row(i).sum(), 1.0, 1e-12);
}

TEST(CrossEntropy, GradientMatchesFiniteDifferences) {
  ClassMatrix z(5, 6);
  for (int i = 0; i < 5; ++i)
    for (int c = 0; c < 6; ++c) z(i, c) = uni(-2, 2);
  const std::vector<int> y = {0, 5, 2, 2, 1};
  ClassMatrix g;
  cross_entropy(z, y, &g);
  for (int i = 0; i < 5; ++i) {
    for (int c = 0; c < 6; ++c) {
      const double fd = testing_support::central_diff(
          [&](double x) { ClassMatrix q = z; q(i, c) = x; return cross_entropy(q, y); }, z(i, c));
      EXPECT_LE(rel_err(g(i, c), fd, 1e-8), 1e-4);
    }
  }
}

TEST(TotalLoss, Sum) {
  EXPECT_EQ(total_loss(0, 0), 0.0);
  EXPECT_DOUBLE_EQ(total_loss(0.3, 0.7), 1.0);
}
