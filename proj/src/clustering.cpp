#include "artic/clustering.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <numeric>

#include "artic/errors.hpp"

namespace artic {

std::size_t DbscanResult::noise_count() const {
  return static_cast<std::size_t>(std::count(label.begin(), label.end(), -1));
}

DbscanResult dbscan(std::span<const Vec3> points, double eps, int min_pts) {
  if (!(eps > 0)) throw InvalidArgument("dbscan: eps must be positive");
  if (min_pts < 1) throw InvalidArgument("dbscan: min_pts must be >= 1");
  const std::size_t n = points.size();
  const double eps2 = eps * eps;

  DbscanResult r;
  r.label.assign(n, -1);
  r.core.assign(n, 0);
  // Exact neighborhoods (self included), scanned in ascending index order.
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t count = 0;
    for (std::size_t j = 0; j < n; ++j) count += (points[i] - points[j]).squaredNorm() <= eps2 ? 1 : 0;
    r.core[i] = count >= static_cast<std::size_t>(min_pts) ? 1 : 0;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (r.label[i] != -1 || !r.core[i]) continue;
    const int id = r.clusters++;
    std::deque<std::uint32_t> queue{static_cast<std::uint32_t>(i)};
    r.label[i] = id;
    while (!queue.empty()) {
      const auto p = queue.front();
      queue.pop_front();
      if (!r.core[p]) continue;
      for (std::size_t q = 0; q < n; ++q) {
        if (r.label[q] != -1 || (points[p] - points[q]).squaredNorm() > eps2) continue;
        r.label[q] = id;
        queue.push_back(static_cast<std::uint32_t>(q));
      }
    }
  }
  return r;
}

SegmentationResult segment_instances(const SequenceSample& sample, std::span<const Vec3> offsets,
                                     std::span<const SemanticClass> semantics,
                                     const ClusterSettings& settings) {
  sample.check();
  const std::size_t n_frame = sample.points_per_frame();
  const std::size_t total = sample.total_points();
  if (offsets.size() != total || semantics.size() != total) {
    throw InvalidArgument("segment_instances: offsets/semantics not congruent with the sample");
  }
  SegmentationResult out;
  out.frames = sample.num_frames();
  out.points = n_frame;
  out.semantic.assign(semantics.begin(), semantics.end());
  out.instance.assign(total, 0);

  std::vector<std::size_t> things;
  std::vector<Vec3> shifted;
  for (std::size_t k = 0; k < total; ++k) {
    if (!is_thing(semantics[k])) continue;
    things.push_back(k);
    shifted.push_back(sample.frames[k / n_frame].xyz[k % n_frame] + offsets[k]);
  }
  if (things.empty()) return out;

  auto db = dbscan(shifted, settings.eps, settings.min_pts);
  auto& label = db.label;
  if (db.clusters == 0) {
    // Nothing dense enough: keep the map total with a single instance.
    std::fill(label.begin(), label.end(), 0);
    db.clusters = 1;
  } else if (db.noise_count() > 0) {
    std::vector<Vec3> centroid(db.clusters, Vec3::Zero());
    std::vector<std::size_t> count(db.clusters, 0);
    for (std::size_t i = 0; i < shifted.size(); ++i) {
      if (label[i] < 0) continue;
      centroid[label[i]] += shifted[i];
      ++count[label[i]];
    }
    for (int c = 0; c < db.clusters; ++c) centroid[c] /= static_cast<double>(count[c]);
    for (std::size_t i = 0; i < shifted.size(); ++i) {
      if (label[i] >= 0) continue;
      double best = std::numeric_limits<double>::infinity();
      int best_c = 0;
      for (int c = 0; c < db.clusters; ++c) {
        const double d = (shifted[i] - centroid[c]).squaredNorm();
        if (d < best) {
          best = d;
          best_c = c;
        }
      }
      label[i] = best_c;
    }
  }

  std::vector<std::size_t> size(db.clusters, 0);
  std::vector<std::size_t> first(db.clusters, std::numeric_limits<std::size_t>::max());
  for (std::size_t i = 0; i < shifted.size(); ++i) {
    ++size[label[i]];
    first[label[i]] = std::min(first[label[i]], i);
  }
  std::vector<int> order(db.clusters);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return size[a] != size[b] ? size[a] > size[b] : first[a] < first[b];
  });
  std::vector<std::uint32_t> id_of(db.clusters);
  for (std::size_t r = 0; r < order.size(); ++r) id_of[order[r]] = static_cast<std::uint32_t>(r + 1);
  for (std::size_t i = 0; i < things.size(); ++i) out.instance[things[i]] = id_of[label[i]];
  return out;
}

}  // namespace artic
