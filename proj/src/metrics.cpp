#include "artic/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "artic/errors.hpp"

namespace artic {

double lstq(double s_cls, double s_assoc) { return std::sqrt(s_cls * s_assoc); }

namespace {

void check_congruent(const SegmentationResult& gt, const SegmentationResult& pred) {
  gt.check();
  pred.check();
  if (gt.frames != pred.frames || gt.points != pred.points) {
    throw InvalidArgument("prediction layout " + std::to_string(pred.frames) + "x" +
                          std::to_string(pred.points) + " does not match ground truth " +
                          std::to_string(gt.frames) + "x" + std::to_string(gt.points));
  }
}

// Sum over gt things instances b of (1/|b|) * sum_a |a n b| * IoU(a, b).
double association_sum(const SegmentationResult& gt, const SegmentationResult& pred,
                       std::size_t& gt_count) {
  std::unordered_map<std::uint32_t, std::size_t> gt_size, pred_size;
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::size_t> overlap;  // (gt, pred)
  for (std::size_t i = 0; i < gt.size(); ++i) {
    const bool gt_thing = is_thing(gt.semantic[i]) && gt.instance[i] != 0;
    const auto a = pred.instance[i];
    if (a != 0) ++pred_size[a];
    if (!gt_thing) continue;
    ++gt_size[gt.instance[i]];
    if (a != 0) ++overlap[{gt.instance[i], a}];
  }
  std::map<std::uint32_t, double> per_gt;
  for (const auto& [key, inter] : overlap) {
    const double b = static_cast<double>(gt_size[key.first]);
    const double a = static_cast<double>(pred_size[key.second]);
    const double tpa = static_cast<double>(inter);
    per_gt[key.first] += tpa * (tpa / (a + b - tpa));
  }
  double sum = 0.0;
  for (const auto& [id, size] : gt_size) sum += per_gt[id] / static_cast<double>(size);
  gt_count = gt_size.size();
  return sum;
}

}  // namespace

double s_cls(const SegmentationResult& gt, const SegmentationResult& pred,
             std::array<double, kNumClasses>* per_class, bool strict_classes) {
  Evaluator ev(strict_classes);
  ev.add(gt, pred);
  const auto r = ev.report();
  if (per_class) *per_class = r.iou;
  return r.s_cls;
}

double s_assoc(const SegmentationResult& gt, const SegmentationResult& pred) {
  check_congruent(gt, pred);
  std::size_t count = 0;
  const double sum = association_sum(gt, pred, count);
  return count == 0 ? 1.0 : sum / static_cast<double>(count);
}

void Evaluator::add(const SegmentationResult& gt, const SegmentationResult& pred) {
  check_congruent(gt, pred);
  for (std::size_t i = 0; i < gt.size(); ++i) {
    const auto g = static_cast<int>(gt.semantic[i]);
    const auto p = static_cast<int>(pred.semantic[i]);
    if (g == p) {
      ++tp_[g];
    } else {
      ++fn_[g];
      ++fp_[p];
    }
  }
  std::size_t count = 0;
  assoc_sum_ += association_sum(gt, pred, count);
  gt_instances_ += count;
  points_ += gt.size();
}

MetricReport Evaluator::report() const {
  MetricReport r;
  double sum = 0.0;
  int used = 0;
  for (int c = 0; c < kNumClasses; ++c) {
    r.in_gt[c] = tp_[c] + fn_[c] > 0;
    r.in_pred[c] = tp_[c] + fp_[c] > 0;
    const auto denom = tp_[c] + fp_[c] + fn_[c];
    r.iou[c] = denom == 0 ? 1.0 : static_cast<double>(tp_[c]) / static_cast<double>(denom);
    if (!strict_ || r.in_gt[c]) {
      sum += r.iou[c];
      ++used;
    }
  }
  r.s_cls = used == 0 ? 1.0 : sum / used;
  r.s_assoc = gt_instances_ == 0 ? 1.0 : assoc_sum_ / static_cast<double>(gt_instances_);
  r.lstq = lstq(r.s_cls, r.s_assoc);
  r.gt_instances = gt_instances_;
  r.points = points_;
  return r;
}

void to_json(nlohmann::json& j, const MetricReport& r) {
  auto classes = nlohmann::json::object();
  for (int c = 0; c < kNumClasses; ++c) {
    classes[std::string(class_name(static_cast<SemanticClass>(c)))] = {
        {"iou", r.iou[c]}, {"in_gt", r.in_gt[c]}, {"in_pred", r.in_pred[c]}};
  }
  j = {{"s_cls", r.s_cls},           {"s_assoc", r.s_assoc}, {"lstq", r.lstq},
       {"gt_instances", r.gt_instances}, {"points", r.points},   {"classes", classes}};
}

std::string format_table(const std::map<std::string, MetricReport>& rows) {
  std::size_t width = 5;
  for (const auto& [name, _] : rows) width = std::max(width, name.size());
  std::ostringstream out;
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%-*s %8s %8s %8s", static_cast<int>(width), "group", "S_cls",
                "S_assoc", "LSTQ");
  out << buf;
  for (int c = 0; c < kNumClasses; ++c) {
    std::snprintf(buf, sizeof(buf), " %11s", std::string(class_name(static_cast<SemanticClass>(c))).c_str());
    out << buf;
  }
  out << '\n';
  for (const auto& [name, r] : rows) {
    std::snprintf(buf, sizeof(buf), "%-*s %8.4f %8.4f %8.4f", static_cast<int>(width), name.c_str(),
                  r.s_cls, r.s_assoc, r.lstq);
    out << buf;
    for (int c = 0; c < kNumClasses; ++c) {
      std::snprintf(buf, sizeof(buf), " %11.4f", r.iou[c]);
      out << buf;
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace artic
