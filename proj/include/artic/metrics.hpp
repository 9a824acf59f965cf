#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "artic/segmentation.hpp"

namespace artic {

struct MetricReport {
  std::array<double, kNumClasses> iou{};
  std::array<bool, kNumClasses> in_gt{};
  std::array<bool, kNumClasses> in_pred{};
  double s_cls = 0.0;
  double s_assoc = 0.0;
  double lstq = 0.0;
  std::size_t gt_instances = 0;
  std::size_t points = 0;
};

/// Geometric mean of the semantic and association scores.
double lstq(double s_cls, double s_assoc);

/// Mean IoU over the six classes, pooled over all frames. A class absent from both
/// ground truth and prediction scores 1; with `strict_classes` only classes present in
/// the ground truth are averaged.
double s_cls(const SegmentationResult& gt, const SegmentationResult& pred,
             std::array<double, kNumClasses>* per_class = nullptr, bool strict_classes = false);

/// Association score over the things instances of the ground truth, with every set
/// pooled over the whole sequence.
double s_assoc(const SegmentationResult& gt, const SegmentationResult& pred);

/// Accumulates many sequences into one report. Instances of different sequences are
/// distinct; class counts are pooled.
class Evaluator {
 public:
  explicit Evaluator(bool strict_classes = false) : strict_(strict_classes) {}

  /// Throws InvalidArgument when the two results are not congruent.
  void add(const SegmentationResult& gt, const SegmentationResult& pred);
  MetricReport report() const;

 private:
  bool strict_;
  std::array<std::uint64_t, kNumClasses> tp_{}, fp_{}, fn_{};
  double assoc_sum_ = 0.0;
  std::size_t gt_instances_ = 0;
  std::size_t points_ = 0;
};

void to_json(nlohmann::json& j, const MetricReport& r);

/// Aligned plain-text table: one row per named report.
std::string format_table(const std::map<std::string, MetricReport>& rows);

}  // namespace artic
