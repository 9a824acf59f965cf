#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

#include "artic/geometry.hpp"
#include "artic/point_cloud.hpp"

namespace artic {

/// Rows are points, columns are class probabilities (or logits).
using ClassMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// L1 distance between predicted and target offsets. Gradient wrt `pred` is sign(pred - target).
double l_dist(const Vec3& pred, const Vec3& target, Vec3* grad = nullptr);

/// Norms below this make the angle loss (and its gradient) zero.
inline constexpr double kAngleNormGuard = 1e-8;

/// 1 - cosine similarity.
double l_angle(const Vec3& pred, const Vec3& target, Vec3* grad = nullptr);

struct CanonLossOptions {
  /// Divide by the number of things points instead of S*N.
  bool normalize_by_mask = false;
};

/// Masked mean of l_dist + l_angle over an S x N offset field. When `grad` is given
/// it receives d loss / d predicted, one entry per point.
double l_canon(const OffsetField& field, std::vector<Vec3>* grad = nullptr,
               const CanonLossOptions& options = {});

/// Row-wise softmax.
ClassMatrix softmax(const ClassMatrix& logits);
/// Chain rule through a row-wise softmax: d loss / d logits from d loss / d probs.
ClassMatrix softmax_backward(const ClassMatrix& probs, const ClassMatrix& grad_probs);

/// Gradient of the Lovasz extension of the Jaccard loss, for ground-truth indicators
/// sorted by decreasing error.
std::vector<double> lovasz_grad(std::span<const double> gt_sorted);

/// Lovasz-Softmax over the classes present in `labels`, or over `classes` when given.
/// `grad` receives d loss / d probs.
double lovasz_softmax(const ClassMatrix& probs, std::span<const int> labels,
                      ClassMatrix* grad = nullptr, const std::vector<int>* classes = nullptr);

/// Mean cross entropy on logits; `grad` receives d loss / d logits.
double cross_entropy(const ClassMatrix& logits, std::span<const int> labels,
                     ClassMatrix* grad = nullptr);

inline double total_loss(double sem, double canon) { return sem + canon; }

}  // namespace artic
