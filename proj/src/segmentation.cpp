#include "artic/segmentation.hpp"

#include "artic/errors.hpp"

namespace artic {

void SegmentationResult::check() const {
  if (semantic.size() != frames * points || instance.size() != frames * points) {
    throw InvalidArgument("segmentation result is not congruent with its S x N layout");
  }
}

SegmentationResult ground_truth(const SequenceSample& sample) {
  sample.check();
  SegmentationResult gt;
  gt.frames = sample.num_frames();
  gt.points = sample.points_per_frame();
  for (const auto& f : sample.frames) {
    gt.semantic.insert(gt.semantic.end(), f.semantic.begin(), f.semantic.end());
    for (std::size_t i = 0; i < f.size(); ++i) {
      gt.instance.push_back(is_thing(f.semantic[i]) ? f.instance[i] : 0u);
    }
  }
  return gt;
}

}  // namespace artic
