#pragma once

#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "artic/articulated.hpp"

namespace artic {

enum class ProfileKind { Power, Sigmoid };

/// Time law for one joint moving from q0 to qf over [0, duration].
struct TrajectoryProfile {
  ProfileKind kind = ProfileKind::Power;
  double exponent = 1.0;  ///< power law only
  bool inverted = false;  ///< time-reversed: starts at qf, ends at q0
  double q0 = 0.0;
  double qf = 1.0;
  double duration = 1.0;

  void check() const;
};

/// Logistic ease curve 1 / (1 + e^(6 - 12x)).
double ease_sigmoid(double x);

/// Joint value at time t in [0, duration].
double eval(const TrajectoryProfile& profile, double t);

/// n >= 2 configurations at t_i = i * T / (n - 1), endpoints included.
std::vector<JointConfig> sample_states(const std::vector<TrajectoryProfile>& profiles, int n);

void to_json(nlohmann::json& j, const TrajectoryProfile& p);
void from_json(const nlohmann::json& j, TrajectoryProfile& p);

}  // namespace artic
