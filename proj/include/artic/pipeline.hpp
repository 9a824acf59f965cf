#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "artic/clustering.hpp"
#include "artic/kinematics.hpp"
#include "artic/metrics.hpp"
#include "artic/network.hpp"
#include "artic/scenegen.hpp"
#include "artic/segmentation.hpp"

namespace artic {

inline constexpr const char* kToolVersion = "0.1.0";

enum class Spacing { Max, Adjacent };
Spacing spacing_from_string(const std::string& s);
std::string to_string(Spacing s);

/// State-index windows of `frames` states each. Max spacing gives the single window
/// floor(i * (n - 1) / (frames - 1)); adjacent gives consecutive non-overlapping windows.
std::vector<std::vector<int>> frame_windows(int n_states, int frames, Spacing spacing);

struct ObjectEntry {
  std::string name;
  std::string template_kind;
  std::string split;  ///< "train" or "test"
};

struct RunManifest {
  std::string root = ".";  ///< relative to the manifest file
  Subset subset = Subset::M;
  std::uint64_t seed = 42;
  int n_states = 100;
  int n_views = 18;
  int resolution = 128;
  std::size_t points = 2048;
  int frames = 3;
  Spacing spacing = Spacing::Max;
  int train_objects = 8;
  int test_objects = 4;
  std::vector<std::string> templates;
  std::string tool_version = kToolVersion;
  std::vector<ObjectEntry> objects;
};

void to_json(nlohmann::json& j, const RunManifest& m);
void from_json(const nlohmann::json& j, RunManifest& m);

struct GenerateOptions {
  Subset subset = Subset::M;
  std::uint64_t seed = 42;
  int n_states = 100;
  int views = 18;
  int resolution = 128;
  std::size_t points = 2048;
  int frames = 3;
  Spacing spacing = Spacing::Max;
  int train_objects = 8;
  int test_objects = 4;
  std::vector<std::string> templates;  ///< empty: the subset's templates
};

/// Writes manifest.json and objects/<name>/{model.json, states.json, frames/state_XXX.a4df}.
RunManifest generate_dataset(const std::filesystem::path& out, const GenerateOptions& options,
                             const std::function<void(const std::string&)>& log = {});

struct ObjectData {
  ObjectEntry entry;
  ArticulatedModel model;
  std::vector<TrajectoryProfile> profiles;
  std::vector<JointConfig> states;
};

/// A generated dataset: the manifest plus every object's model and states.
struct Dataset {
  std::filesystem::path root;
  RunManifest manifest;
  std::map<std::string, ObjectData> objects;

  static Dataset open(const std::filesystem::path& dir);
  const ObjectData& object(const std::string& name) const;
  std::filesystem::path frame_path(const std::string& object, int state) const;
};

struct SequenceRef {
  std::string object;
  std::vector<int> states;
};

struct SequenceSelection {
  std::string split = "all";      ///< "train", "test" or "all"
  int frames = 0;                 ///< <= 0: the manifest value
  std::string spacing;            ///< empty: the manifest value
  std::vector<int> state_indices; ///< non-empty: exactly this window for every object
};

/// Sequences in manifest object order, windows in ascending order.
std::vector<SequenceRef> select_sequences(const Dataset& data, const SequenceSelection& sel);
SequenceSample load_sequence(const Dataset& data, const SequenceRef& ref);
std::vector<JointConfig> sequence_states(const Dataset& data, const SequenceRef& ref);

/// eps resolved against the object's bounding radius when not set explicitly.
ClusterSettings resolve_cluster(const ClusterSettings& settings, const ArticulatedModel& model);

struct SequencePrediction {
  SequenceRef ref;
  SegmentationResult result;
};

/// Ground-truth semantics and ground-truth offsets under `mode`, then clustering.
std::vector<SequencePrediction> oracle_segment(const Dataset& data,
                                               const std::vector<SequenceRef>& refs,
                                               TargetMode mode, const ClusterSettings& cluster);

/// Network semantics (argmax) and offsets, then clustering.
std::vector<SequencePrediction> predict(const Dataset& data, const std::vector<SequenceRef>& refs,
                                        const ModelParams& params, const ClusterSettings& cluster);

/// Prepared training samples with offset targets under `mode`.
std::vector<PreparedSample> training_samples(const Dataset& data,
                                             const std::vector<SequenceRef>& refs, TargetMode mode,
                                             int kappa);

/// predictions.json plus one A4DP file per sequence under <dir>/<object>/.
void write_predictions(const std::filesystem::path& dir,
                       const std::vector<SequencePrediction>& preds, const nlohmann::json& meta);
std::vector<SequencePrediction> read_predictions(const std::filesystem::path& dir);

struct EvaluationResult {
  MetricReport overall;
  std::map<std::string, MetricReport> per_template;
  std::size_t sequences = 0;
};

/// Throws InvalidArgument when a prediction is not congruent with its ground truth.
EvaluationResult evaluate(const Dataset& data, const std::vector<SequencePrediction>& preds,
                          bool strict_classes);

void to_json(nlohmann::json& j, const EvaluationResult& r);
std::string format_report(const EvaluationResult& r);

}  // namespace artic
