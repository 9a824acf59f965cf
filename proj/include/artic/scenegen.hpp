#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "artic/articulated.hpp"
#include "artic/trajectory.hpp"

namespace artic {

/// Size parameters of a template, in meters. For `scissors_legs` width is the blade
/// length, depth the blade width and height the blade thickness.
struct TemplateDims {
  double width = 0.0;
  double depth = 0.0;
  double height = 0.0;
};

const std::vector<std::string>& template_kinds();
/// Templates with one moving part (subset S) and two moving parts (subset D).
const std::vector<std::string>& single_part_templates();
const std::vector<std::string>& two_part_templates();
TemplateDims default_dims(const std::string& kind);

/// Procedural box-shell object. `seed` drives the part colors only.
ArticulatedModel build_template(const std::string& kind, const TemplateDims& dims,
                                std::uint64_t seed);

enum class Subset { S, D, M };

Subset subset_from_string(const std::string& s);
std::string to_string(Subset s);

struct ScenarioOptions {
  Subset subset = Subset::M;
  int count = 12;
  int n_states = 100;
  std::vector<std::string> templates;               ///< overrides the subset's template list
  std::vector<double> exponent_menu = {0.5, 1.0, 2.0};
  double duration = 1.0;
  double dims_jitter = 0.1;                         ///< relative, uniform in [-j, j]
};

struct ScenarioItem {
  std::string name;
  ArticulatedModel model;
  std::vector<TrajectoryProfile> profiles;  ///< one per joint
  std::vector<JointConfig> states;
};

/// Seed-deterministic list of objects with their sampled articulation states.
std::vector<ScenarioItem> scenario(std::uint64_t seed, const ScenarioOptions& options);

/// 64-bit mixing used to derive independent sub-seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

/// Uniform double in [0, 1) from the top 53 bits of one engine draw.
double uniform01(std::mt19937_64& rng);

}  // namespace artic
