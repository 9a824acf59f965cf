#pragma once

#include <cstdint>
#include <vector>

#include "artic/articulated.hpp"
#include "artic/point_cloud.hpp"

namespace artic {

/// Per-point semantic class and instance id of one sequence sample, frame-major.
struct SegmentationResult {
  std::size_t frames = 0;
  std::size_t points = 0;
  std::vector<SemanticClass> semantic;
  std::vector<std::uint32_t> instance;  ///< 0 means "no instance" (stuff)

  std::size_t size() const { return semantic.size(); }
  void check() const;
};

/// Ground truth of a sample in SegmentationResult form.
SegmentationResult ground_truth(const SequenceSample& sample);

}  // namespace artic
