#include "support.hpp"

#include "artic/kinematics.hpp"

namespace testing_support {

artic::PointCloudFrame sample_surface(const artic::ArticulatedModel& m, const artic::JointConfig& q,
                                      int per_part, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  artic::PointCloudFrame f;
  for (const auto& p : m.parts) {
    const auto pose = artic::part_pose(m, p.id, q);
    for (int k = 0; k < per_part; ++k) {
      const auto& b = p.boxes[k % p.boxes.size()];
      Vec3 x = b.lo + Vec3(u(rng), u(rng), u(rng)).cwiseProduct(b.extent());
      const int face = static_cast<int>(u(rng) * 3);
      x[face] = u(rng) < 0.5 ? b.lo[face] : b.hi[face];
      f.push_back(pose.apply(x), p.color, p.semantic, static_cast<std::uint32_t>(p.id));
    }
  }
  return f;
}

}  // namespace testing_support
