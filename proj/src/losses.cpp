#include "artic/losses.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "artic/errors.hpp"

namespace artic {

double l_dist(const Vec3& pred, const Vec3& target, Vec3* grad) {
  const Vec3 diff = pred - target;
  if (grad) {
    for (int d = 0; d < 3; ++d) (*grad)[d] = diff[d] > 0 ? 1.0 : (diff[d] < 0 ? -1.0 : 0.0);
  }
  return diff.cwiseAbs().sum();
}

double l_angle(const Vec3& pred, const Vec3& target, Vec3* grad) {
  const double np = pred.norm();
  const double nt = target.norm();
  if (np < kAngleNormGuard || nt < kAngleNormGuard) {
    if (grad) grad->setZero();
    return 0.0;
  }
  const double cosine = pred.dot(target) / (np * nt);
  if (grad) *grad = -(target / (np * nt) - cosine * pred / (np * np));
  return 1.0 - cosine;
}

double l_canon(const OffsetField& field, std::vector<Vec3>* grad, const CanonLossOptions& options) {
  field.check();
  if (grad) grad->assign(field.size(), Vec3::Zero());
  double norm = static_cast<double>(field.size());
  if (options.normalize_by_mask) {
    norm = static_cast<double>(std::count(field.mask.begin(), field.mask.end(), 1));
  }
  if (norm == 0.0) return 0.0;
  double total = 0.0;
  for (std::size_t k = 0; k < field.size(); ++k) {
    if (!field.mask[k]) continue;
    Vec3 gd, ga;
    total += l_dist(field.predicted[k], field.target[k], grad ? &gd : nullptr) +
             l_angle(field.predicted[k], field.target[k], grad ? &ga : nullptr);
    if (grad) (*grad)[k] = (gd + ga) / norm;
  }
  return total / norm;
}

ClassMatrix softmax(const ClassMatrix& logits) {
  ClassMatrix out(logits.rows(), logits.cols());
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    const double mx = logits.row(i).maxCoeff();
    out.row(i) = (logits.row(i).array() - mx).exp();
    out.row(i) /= out.row(i).sum();
  }
  return out;
}

ClassMatrix softmax_backward(const ClassMatrix& probs, const ClassMatrix& grad_probs) {
  ClassMatrix out(probs.rows(), probs.cols());
  for (Eigen::Index i = 0; i < probs.rows(); ++i) {
    const double inner = probs.row(i).dot(grad_probs.row(i));
    out.row(i) = probs.row(i).array() * (grad_probs.row(i).array() - inner);
  }
  return out;
}

std::vector<double> lovasz_grad(std::span<const double> gt_sorted) {
  const std::size_t n = gt_sorted.size();
  std::vector<double> jaccard(n);
  const double gts = std::accumulate(gt_sorted.begin(), gt_sorted.end(), 0.0);
  double cum_fg = 0.0, cum_bg = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    cum_fg += gt_sorted[i];
    cum_bg += 1.0 - gt_sorted[i];
    const double intersection = gts - cum_fg;
    const double uni = gts + cum_bg;
    jaccard[i] = 1.0 - intersection / uni;
  }
  for (std::size_t i = n; i-- > 1;) jaccard[i] -= jaccard[i - 1];
  return jaccard;
}

double lovasz_softmax(const ClassMatrix& probs, std::span<const int> labels, ClassMatrix* grad,
                      const std::vector<int>* classes) {
  const auto n = static_cast<std::size_t>(probs.rows());
  if (n == 0) throw InvalidArgument("lovasz_softmax: empty input");
  if (labels.size() != n) throw InvalidArgument("lovasz_softmax: label count mismatch");
  const int k = static_cast<int>(probs.cols());

  std::vector<int> active;
  if (classes) {
    active = *classes;
  } else {
    std::vector<char> present(k, 0);
    for (const int y : labels) {
      if (y < 0 || y >= k) throw InvalidArgument("lovasz_softmax: label out of range");
      present[y] = 1;
    }
    for (int c = 0; c < k; ++c) {
      if (present[c]) active.push_back(c);
    }
  }
  if (active.empty()) throw InvalidArgument("lovasz_softmax: no class present");
  if (grad) grad->setZero(probs.rows(), probs.cols());

  std::vector<double> errors(n), fg(n), fg_sorted(n);
  std::vector<std::size_t> order(n);
  double loss = 0.0;
  const double weight = 1.0 / static_cast<double>(active.size());
  for (const int c : active) {
    for (std::size_t i = 0; i < n; ++i) {
      fg[i] = labels[i] == c ? 1.0 : 0.0;
      errors[i] = std::abs(fg[i] - probs(static_cast<Eigen::Index>(i), c));
    }
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return errors[a] > errors[b]; });
    for (std::size_t r = 0; r < n; ++r) fg_sorted[r] = fg[order[r]];
    const auto g = lovasz_grad(fg_sorted);
    double class_loss = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      const auto i = order[r];
      class_loss += errors[i] * g[r];
      // d|fg - p| / dp is -1 on foreground points and +1 elsewhere.
      if (grad) (*grad)(static_cast<Eigen::Index>(i), c) += weight * g[r] * (fg[i] > 0 ? -1.0 : 1.0);
    }
    loss += weight * class_loss;
  }
  return loss;
}

double cross_entropy(const ClassMatrix& logits, std::span<const int> labels, ClassMatrix* grad) {
  const auto n = logits.rows();
  if (n == 0) throw InvalidArgument("cross_entropy: empty input");
  if (static_cast<Eigen::Index>(labels.size()) != n) {
    throw InvalidArgument("cross_entropy: label count mismatch");
  }
  const ClassMatrix p = softmax(logits);
  double loss = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) loss -= std::log(std::max(p(i, labels[i]), 1e-300));
  if (grad) {
    *grad = p;
    for (Eigen::Index i = 0; i < n; ++i) (*grad)(i, labels[i]) -= 1.0;
    *grad /= static_cast<double>(n);
  }
  return loss / static_cast<double>(n);
}

}  // namespace artic
