#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "artic/geometry.hpp"
#include "artic/point_cloud.hpp"
#include "artic/segmentation.hpp"

namespace artic {

/// Raw DBSCAN output: cluster index per point (-1 = noise) and core flags.
struct DbscanResult {
  std::vector<int> label;
  std::vector<std::uint8_t> core;
  int clusters = 0;

  std::size_t noise_count() const;
};

/// Density-based clustering. Seeds are visited in point-index order; a border point
/// belongs to the first cluster that reaches it.
DbscanResult dbscan(std::span<const Vec3> points, double eps, int min_pts);

struct ClusterSettings {
  double eps = 0.0;  ///< meters; <= 0 means "derive from the model"
  int min_pts = 10;
};

/// eps default: this fraction of the model bounding radius.
inline constexpr double kEpsRadiusFraction = 0.05;

/// Things points of every frame are shifted by their offsets and clustered jointly, so
/// one part keeps one id throughout the sequence. Noise points join the nearest cluster
/// centroid; ids run from 1 by decreasing cluster size (ties: smallest member index).
/// Stuff points get id 0. `offsets` is frame-major (s * N + n).
SegmentationResult segment_instances(const SequenceSample& sample, std::span<const Vec3> offsets,
                                     std::span<const SemanticClass> semantics,
                                     const ClusterSettings& settings);

}  // namespace artic
