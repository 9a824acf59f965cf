#pragma once

#include <cstdint>
#include <vector>

#include "artic/articulated.hpp"
#include "artic/geometry.hpp"

namespace artic {

/// A colored, labeled point cloud for one articulation state.
struct PointCloudFrame {
  std::vector<Vec3> xyz;
  std::vector<Vec3> rgb;
  std::vector<SemanticClass> semantic;
  std::vector<std::uint32_t> instance;  ///< part id; 0 is the body
  int state_index = 0;

  std::size_t size() const { return xyz.size(); }
  void reserve(std::size_t n);
  void push_back(const Vec3& p, const Vec3& color, SemanticClass sem, std::uint32_t inst);
  /// Appends point `i` of `other`.
  void append_from(const PointCloudFrame& other, std::size_t i);
  /// Throws InvalidArgument when arrays disagree in length or coordinates are non-finite.
  void check() const;
};

/// S frames with a common point count N.
struct SequenceSample {
  std::vector<PointCloudFrame> frames;

  std::size_t num_frames() const { return frames.size(); }
  std::size_t points_per_frame() const { return frames.empty() ? 0 : frames.front().size(); }
  std::size_t total_points() const { return num_frames() * points_per_frame(); }
  void check() const;
};

/// Per-point predicted and target offsets plus the things mask, flattened frame-major
/// (index s * N + n).
struct OffsetField {
  std::size_t frames = 0;
  std::size_t points = 0;
  std::vector<Vec3> predicted;
  std::vector<Vec3> target;
  std::vector<std::uint8_t> mask;

  std::size_t size() const { return frames * points; }
  void resize(std::size_t s, std::size_t n);
  void check() const;
};

}  // namespace artic
