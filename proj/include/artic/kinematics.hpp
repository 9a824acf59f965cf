#pragma once

#include <vector>

#include "artic/articulated.hpp"
#include "artic/geometry.hpp"
#include "artic/point_cloud.hpp"

namespace artic {

/// Transform contributed by one joint. Throws LimitViolation outside [lower, upper].
RigidTransform joint_transform(const Joint& joint, double value);

/// Pose of `part_id` in the origin frame: ordered product of the joint transforms
/// along the chain from the root. The root part maps to the identity.
RigidTransform part_pose(const ArticulatedModel& model, int part_id, const JointConfig& q);

/// Moves a point observed on `part_id` at configuration `q_t` to where the same
/// material point sits at configuration `q_c`.
Vec3 canonical_map(const ArticulatedModel& model, int part_id, const JointConfig& q_t,
                   const JointConfig& q_c, const Vec3& x);

/// Mid-range configuration used as the canonical articulation state.
JointConfig canonical_config(const ArticulatedModel& model);

/// Throws InvalidArgument if `q` has the wrong size, LimitViolation if out of range.
void check_config(const ArticulatedModel& model, const JointConfig& q);

enum class TargetMode {
  Canonical,   ///< centroid of the part's points mapped to the canonical state
  Centroid4D,  ///< spatial centroid of the part's points pooled over all frames
};

TargetMode target_mode_from_string(const std::string& s);
std::string to_string(TargetMode m);

/// Per-point regression targets for a sequence. `states[s]` is the configuration
/// at frame s. Stuff points get a zero offset and mask 0. Parts with no points are
/// skipped (their id is appended to `skipped_parts` when given).
OffsetField gt_offsets(const SequenceSample& sample, const ArticulatedModel& model,
                       const std::vector<JointConfig>& states, const JointConfig& q_c,
                       TargetMode mode, std::vector<int>* skipped_parts = nullptr);

/// Target position of every part under `mode`; absent parts are NaN.
std::vector<Vec3> part_targets(const SequenceSample& sample, const ArticulatedModel& model,
                               const std::vector<JointConfig>& states, const JointConfig& q_c,
                               TargetMode mode);

}  // namespace artic
