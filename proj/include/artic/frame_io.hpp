#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "artic/articulated.hpp"
#include "artic/point_cloud.hpp"
#include "artic/segmentation.hpp"

namespace artic {

/// Frame file, little-endian:
///   "A4DF" | version u32 | count u32 | count x { x y z r g b : f32, semantic u16, pad u16, instance u32 }
inline constexpr std::uint32_t kFrameVersion = 1;

void write_frame(const std::filesystem::path& path, const PointCloudFrame& frame);
/// Throws FormatError on wrong magic, version or truncated data.
PointCloudFrame read_frame(const std::filesystem::path& path);

/// Prediction file, little-endian:
///   "A4DP" | version u32 | frames u32 | points-per-frame u32 | frames*points x { semantic u16, instance u32 }
inline constexpr std::uint32_t kPredictionVersion = 1;

void write_prediction(const std::filesystem::path& path, const SegmentationResult& result);
SegmentationResult read_prediction(const std::filesystem::path& path);

}  // namespace artic
