#include "artic/trajectory.hpp"

#include <cmath>
#include <string>

#include <nlohmann/json.hpp>

#include "artic/errors.hpp"

namespace artic {

void TrajectoryProfile::check() const {
  if (!(duration > 0.0)) throw InvalidArgument("trajectory duration must be positive");
  if (kind == ProfileKind::Power && !(exponent > 0.0)) {
    throw InvalidArgument("power-law exponent must be positive");
  }
}

double ease_sigmoid(double x) { return 1.0 / (1.0 + std::exp(6.0 - 12.0 * x)); }

namespace {

double forward_value(const TrajectoryProfile& p, double t) {
  const double x = t / p.duration;
  const double shape = p.kind == ProfileKind::Power ? std::pow(x, p.exponent) : ease_sigmoid(x);
  return p.q0 + (p.qf - p.q0) * shape;
}

}  // namespace

double eval(const TrajectoryProfile& profile, double t) {
  profile.check();
  if (!(t >= 0.0 && t <= profile.duration)) {
    throw InvalidArgument("trajectory time " + std::to_string(t) + " outside [0, " +
                          std::to_string(profile.duration) + "]");
  }
  return forward_value(profile, profile.inverted ? profile.duration - t : t);
}

std::vector<JointConfig> sample_states(const std::vector<TrajectoryProfile>& profiles, int n) {
  if (n < 2) throw InvalidArgument("sample_states needs n >= 2, got " + std::to_string(n));
  double duration = 1.0;
  for (std::size_t j = 0; j < profiles.size(); ++j) {
    profiles[j].check();
    if (j == 0) {
      duration = profiles[j].duration;
    } else if (profiles[j].duration != duration) {
      throw InvalidArgument("all joint profiles must share the same duration");
    }
  }
  std::vector<JointConfig> states(n);
  for (int i = 0; i < n; ++i) {
    // i == n-1 lands exactly on T so the endpoint is not lost to rounding.
    const double t = (i == n - 1) ? duration : i * duration / (n - 1);
    states[i].values.reserve(profiles.size());
    for (const auto& p : profiles) states[i].values.push_back(eval(p, t));
  }
  return states;
}

void to_json(nlohmann::json& j, const TrajectoryProfile& p) {
  j = {{"kind", p.kind == ProfileKind::Power ? "power" : "sigmoid"},
       {"exponent", p.exponent},
       {"inverted", p.inverted},
       {"q0", p.q0},
       {"qf", p.qf},
       {"duration", p.duration}};
}

void from_json(const nlohmann::json& j, TrajectoryProfile& p) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "power") {
    p.kind = ProfileKind::Power;
  } else if (kind == "sigmoid") {
    p.kind = ProfileKind::Sigmoid;
  } else {
    throw FormatError("unknown trajectory profile '" + kind + "'");
  }
  p.exponent = j.at("exponent").get<double>();
  p.inverted = j.at("inverted").get<bool>();
  p.q0 = j.at("q0").get<double>();
  p.qf = j.at("qf").get<double>();
  p.duration = j.at("duration").get<double>();
}

}  // namespace artic
