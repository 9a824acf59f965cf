#include "artic/kinematics.hpp"

#include <cmath>
#include <iostream>
#include <limits>
#include <string>

#include "artic/errors.hpp"

namespace artic {

RigidTransform joint_transform(const Joint& joint, double value) {
  if (!joint.within_limits(value)) throw LimitViolation(joint.id, value, joint.lower, joint.upper);
  if (joint.kind == JointKind::Revolute) return rotation_about(joint.axis, value, joint.anchor);
  return translation_by(value * joint.axis);
}

void check_config(const ArticulatedModel& model, const JointConfig& q) {
  if (q.size() != model.joints.size()) {
    throw InvalidArgument("joint configuration has " + std::to_string(q.size()) + " values, model '" +
                          model.name + "' has " + std::to_string(model.joints.size()) + " joints");
  }
  for (const auto& j : model.joints) {
    if (!j.within_limits(q[j.id])) throw LimitViolation(j.id, q[j.id], j.lower, j.upper);
  }
}

RigidTransform part_pose(const ArticulatedModel& model, int part_id, const JointConfig& q) {
  const auto chain = model.chain(part_id);
  RigidTransform pose;
  for (const int j : chain) {
    if (static_cast<std::size_t>(j) >= q.size()) {
      throw InvalidArgument("joint configuration is missing joint " + std::to_string(j));
    }
    pose = pose * joint_transform(model.joints[j], q[j]);
  }
  return pose;
}

Vec3 canonical_map(const ArticulatedModel& model, int part_id, const JointConfig& q_t,
                   const JointConfig& q_c, const Vec3& x) {
  const auto to_canon = part_pose(model, part_id, q_c) * part_pose(model, part_id, q_t).inverse();
  return to_canon.apply(x);
}

JointConfig canonical_config(const ArticulatedModel& model) {
  JointConfig q;
  q.values.reserve(model.joints.size());
  for (const auto& j : model.joints) q.values.push_back(0.5 * (j.lower + j.upper));
  return q;
}

TargetMode target_mode_from_string(const std::string& s) {
  if (s == "canonical") return TargetMode::Canonical;
  if (s == "centroid4d") return TargetMode::Centroid4D;
  throw InvalidArgument("unknown target mode '" + s + "' (expected canonical or centroid4d)");
}

std::string to_string(TargetMode m) {
  return m == TargetMode::Canonical ? "canonical" : "centroid4d";
}

std::vector<Vec3> part_targets(const SequenceSample& sample, const ArticulatedModel& model,
                               const std::vector<JointConfig>& states, const JointConfig& q_c,
                               TargetMode mode) {
  sample.check();
  if (states.size() != sample.num_frames()) {
    throw InvalidArgument("gt_offsets: " + std::to_string(sample.num_frames()) + " frames but " +
                          std::to_string(states.size()) + " articulation states");
  }
  const std::size_t np = model.parts.size();
  std::vector<Vec3> sum(np, Vec3::Zero());
  std::vector<std::size_t> count(np, 0);
  for (std::size_t s = 0; s < sample.num_frames(); ++s) {
    const auto& frame = sample.frames[s];
    // One transform per part and frame; point-wise mapping is then a single affine apply.
    std::vector<RigidTransform> to_canon(np);
    if (mode == TargetMode::Canonical) {
      for (std::size_t p = 0; p < np; ++p) {
        const int id = static_cast<int>(p);
        to_canon[p] = part_pose(model, id, q_c) * part_pose(model, id, states[s]).inverse();
      }
    }
    for (std::size_t i = 0; i < frame.size(); ++i) {
      const auto p = frame.instance[i];
      if (p >= np) throw InvalidArgument("point carries unknown part id " + std::to_string(p));
      sum[p] += mode == TargetMode::Canonical ? to_canon[p].apply(frame.xyz[i]) : frame.xyz[i];
      ++count[p];
    }
  }
  std::vector<Vec3> targets(np, Vec3::Constant(std::numeric_limits<double>::quiet_NaN()));
  for (std::size_t p = 0; p < np; ++p) {
    if (count[p] > 0) targets[p] = sum[p] / static_cast<double>(count[p]);
  }
  return targets;
}

OffsetField gt_offsets(const SequenceSample& sample, const ArticulatedModel& model,
                       const std::vector<JointConfig>& states, const JointConfig& q_c,
                       TargetMode mode, std::vector<int>* skipped_parts) {
  const auto targets = part_targets(sample, model, states, q_c, mode);
  for (std::size_t p = 0; p < targets.size(); ++p) {
    if (!targets[p].allFinite() && is_thing(model.parts[p].semantic)) {
      std::cerr << "warning: part " << p << " of '" << model.name << "' has no points; skipped\n";
      if (skipped_parts) skipped_parts->push_back(static_cast<int>(p));
    }
  }
  OffsetField field;
  field.resize(sample.num_frames(), sample.points_per_frame());
  for (std::size_t s = 0; s < sample.num_frames(); ++s) {
    const auto& frame = sample.frames[s];
    for (std::size_t i = 0; i < frame.size(); ++i) {
      const auto k = s * field.points + i;
      if (!is_thing(frame.semantic[i])) continue;
      field.mask[k] = 1;
      field.target[k] = targets[frame.instance[i]] - frame.xyz[i];
    }
  }
  return field;
}

}  // namespace artic
