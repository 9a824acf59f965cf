#include "artic/point_cloud.hpp"

#include <string>

#include "artic/errors.hpp"

namespace artic {

void PointCloudFrame::reserve(std::size_t n) {
  xyz.reserve(n);
  rgb.reserve(n);
  semantic.reserve(n);
  instance.reserve(n);
}

void PointCloudFrame::push_back(const Vec3& p, const Vec3& color, SemanticClass sem,
                                std::uint32_t inst) {
  xyz.push_back(p);
  rgb.push_back(color);
  semantic.push_back(sem);
  instance.push_back(inst);
}

void PointCloudFrame::append_from(const PointCloudFrame& other, std::size_t i) {
  push_back(other.xyz[i], other.rgb[i], other.semantic[i], other.instance[i]);
}

void PointCloudFrame::check() const {
  const auto n = xyz.size();
  if (rgb.size() != n || semantic.size() != n || instance.size() != n) {
    throw InvalidArgument("point cloud frame arrays have mismatched lengths");
  }
  for (const auto& p : xyz) {
    if (!p.allFinite()) throw InvalidArgument("point cloud frame has non-finite coordinates");
  }
}

void SequenceSample::check() const {
  if (frames.empty()) throw InvalidArgument("sequence sample has no frames");
  const auto n = frames.front().size();
  for (const auto& f : frames) {
    f.check();
    if (f.size() != n) {
      throw InvalidArgument("sequence frames differ in point count (" + std::to_string(n) +
                            " vs " + std::to_string(f.size()) + ")");
    }
  }
}

void OffsetField::resize(std::size_t s, std::size_t n) {
  frames = s;
  points = n;
  predicted.assign(s * n, Vec3::Zero());
  target.assign(s * n, Vec3::Zero());
  mask.assign(s * n, 0);
}

void OffsetField::check() const {
  const auto n = size();
  if (predicted.size() != n || target.size() != n || mask.size() != n) {
    throw InvalidArgument("offset field arrays are not congruent with its S x N layout");
  }
}

}  // namespace artic
