#include "artic/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <mutex>

#include <nlohmann/json.hpp>

#include "artic/errors.hpp"
#include "artic/frame_io.hpp"
#include "artic/parallel.hpp"
#include "artic/sensing.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace artic {

Spacing spacing_from_string(const std::string& s) {
  if (s == "max") return Spacing::Max;
  if (s == "adjacent") return Spacing::Adjacent;
  throw InvalidArgument("unknown spacing '" + s + "' (expected max or adjacent)");
}

std::string to_string(Spacing s) { return s == Spacing::Max ? "max" : "adjacent"; }

std::vector<std::vector<int>> frame_windows(int n_states, int frames, Spacing spacing) {
  if (frames < 1 || n_states < 1 || frames > n_states) {
    throw InvalidArgument("cannot take " + std::to_string(frames) + " frames from " +
                          std::to_string(n_states) + " states");
  }
  std::vector<std::vector<int>> out;
  if (spacing == Spacing::Max) {
    std::vector<int> w;
    for (int i = 0; i < frames; ++i) {
      w.push_back(frames == 1 ? 0
                              : static_cast<int>(static_cast<long>(i) * (n_states - 1) / (frames - 1)));
    }
    out.push_back(std::move(w));
  } else {
    for (int k = 0; (k + 1) * frames <= n_states; ++k) {
      std::vector<int> w;
      for (int i = 0; i < frames; ++i) w.push_back(k * frames + i);
      out.push_back(std::move(w));
    }
  }
  return out;
}

void to_json(json& j, const RunManifest& m) {
  auto objects = json::array();
  for (const auto& o : m.objects) {
    objects.push_back({{"name", o.name}, {"template", o.template_kind}, {"split", o.split}});
  }
  j = {{"format", "artic-canon-manifest"},
       {"root", m.root},
       {"subset", to_string(m.subset)},
       {"seed", m.seed},
       {"n_states", m.n_states},
       {"n_views", m.n_views},
       {"resolution", m.resolution},
       {"points", m.points},
       {"frames", m.frames},
       {"spacing", to_string(m.spacing)},
       {"train_objects", m.train_objects},
       {"test_objects", m.test_objects},
       {"templates", m.templates},
       {"tool_version", m.tool_version},
       {"objects", objects}};
}

void from_json(const json& j, RunManifest& m) {
  if (j.value("format", "") != "artic-canon-manifest") {
    throw FormatError("not a dataset manifest (expected format \"artic-canon-manifest\")");
  }
  m.root = j.at("root").get<std::string>();
  m.subset = subset_from_string(j.at("subset").get<std::string>());
  m.seed = j.at("seed").get<std::uint64_t>();
  m.n_states = j.at("n_states").get<int>();
  m.n_views = j.at("n_views").get<int>();
  m.resolution = j.at("resolution").get<int>();
  m.points = j.at("points").get<std::size_t>();
  m.frames = j.at("frames").get<int>();
  m.spacing = spacing_from_string(j.at("spacing").get<std::string>());
  m.train_objects = j.at("train_objects").get<int>();
  m.test_objects = j.at("test_objects").get<int>();
  m.templates = j.at("templates").get<std::vector<std::string>>();
  m.tool_version = j.at("tool_version").get<std::string>();
  m.objects.clear();
  for (const auto& o : j.at("objects")) {
    m.objects.push_back({o.at("name").get<std::string>(), o.at("template").get<std::string>(),
                         o.at("split").get<std::string>()});
  }
}

namespace {

void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  out << j.dump(2) << '\n';
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw FormatError("malformed JSON in '" + path.string() + "': " + e.what());
  }
}

std::string state_file(int state) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "state_%03d.a4df", state);
  return buf;
}

std::string window_name(const std::vector<int>& states) {
  std::string s = "seq";
  for (int i : states) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "_%03d", i);
    s += buf;
  }
  return s;
}

}  // namespace

RunManifest generate_dataset(const fs::path& out, const GenerateOptions& o,
                             const std::function<void(const std::string&)>& log) {
  if (o.n_states < 2) throw InvalidArgument("--states must be >= 2");
  if (o.views < 1) throw InvalidArgument("--views must be >= 1");
  if (o.resolution < 8) throw InvalidArgument("render resolution must be >= 8");
  if (o.points < 1) throw InvalidArgument("--points must be >= 1");
  if (o.train_objects < 0 || o.test_objects < 0 || o.train_objects + o.test_objects < 1) {
    throw InvalidArgument("object counts must be non-negative with at least one object");
  }
  frame_windows(o.n_states, o.frames, o.spacing);  // validates --frames

  ScenarioOptions so;
  so.subset = o.subset;
  so.count = o.train_objects + o.test_objects;
  so.n_states = o.n_states;
  so.templates = o.templates;
  const auto items = scenario(o.seed, so);

  RunManifest m;
  m.subset = o.subset;
  m.seed = o.seed;
  m.n_states = o.n_states;
  m.n_views = o.views;
  m.resolution = o.resolution;
  m.points = o.points;
  m.frames = o.frames;
  m.spacing = o.spacing;
  m.train_objects = o.train_objects;
  m.test_objects = o.test_objects;
  m.templates = o.templates;

  std::error_code ec;
  fs::create_directories(out / "objects", ec);
  if (ec) throw Error("cannot create '" + (out / "objects").string() + "': " + ec.message());

  CaptureSettings cs;
  cs.views = o.views;
  cs.resolution = o.resolution;
  cs.points = o.points;
  std::vector<std::vector<CameraPose>> cameras;
  for (std::size_t k = 0; k < items.size(); ++k) {
    const auto& item = items[k];
    const std::string split = static_cast<int>(k) < o.train_objects ? "train" : "test";
    m.objects.push_back({item.name, item.model.template_kind, split});
    const fs::path dir = out / "objects" / item.name;
    fs::create_directories(dir / "frames", ec);
    if (ec) throw Error("cannot create '" + (dir / "frames").string() + "': " + ec.message());
    write_json(dir / "model.json", item.model);
    json states = {{"profiles", item.profiles}, {"states", item.states}};
    write_json(dir / "states.json", states);
    cameras.push_back(capture_cameras(item.model, cs));
  }
  if (log) {
    log("rendering " + std::to_string(items.size()) + " objects x " + std::to_string(o.n_states) +
        " states x " + std::to_string(o.views) + " views");
  }

  const std::size_t per = static_cast<std::size_t>(o.n_states);
  std::mutex log_mutex;
  parallel_for(items.size() * per, [&](std::size_t job) {
    const auto& item = items[job / per];
    const int s = static_cast<int>(job % per);
    auto frame = capture_state(item.model, item.states[s], cameras[job / per], o.points);
    frame.state_index = s;
    write_frame(out / "objects" / item.name / "frames" / state_file(s), frame);
    if (log && s + 1 == o.n_states) {
      std::lock_guard<std::mutex> lock(log_mutex);
      log("  " + item.name);
    }
  });
  write_json(out / "manifest.json", m);
  return m;
}

Dataset Dataset::open(const fs::path& dir) {
  Dataset d;
  const auto manifest_path = fs::is_directory(dir) ? dir / "manifest.json" : dir;
  d.manifest = read_json(manifest_path).get<RunManifest>();
  d.root = manifest_path.parent_path() / d.manifest.root;
  for (const auto& e : d.manifest.objects) {
    ObjectData od;
    od.entry = e;
    const fs::path base = d.root / "objects" / e.name;
    od.model = read_json(base / "model.json").get<ArticulatedModel>();
    const auto st = read_json(base / "states.json");
    od.profiles = st.at("profiles").get<std::vector<TrajectoryProfile>>();
    od.states = st.at("states").get<std::vector<JointConfig>>();
    if (static_cast<int>(od.states.size()) != d.manifest.n_states) {
      throw FormatError("'" + (base / "states.json").string() + "' has " +
                        std::to_string(od.states.size()) + " states, manifest says " +
                        std::to_string(d.manifest.n_states));
    }
    d.objects.emplace(e.name, std::move(od));
  }
  return d;
}

const ObjectData& Dataset::object(const std::string& name) const {
  const auto it = objects.find(name);
  if (it == objects.end()) throw InvalidArgument("dataset has no object '" + name + "'");
  return it->second;
}

fs::path Dataset::frame_path(const std::string& name, int state) const {
  return root / "objects" / name / "frames" / state_file(state);
}

std::vector<SequenceRef> select_sequences(const Dataset& data, const SequenceSelection& sel) {
  if (sel.split != "all" && sel.split != "train" && sel.split != "test") {
    throw InvalidArgument("unknown split '" + sel.split + "' (expected train, test or all)");
  }
  const auto& m = data.manifest;
  std::vector<std::vector<int>> windows;
  if (!sel.state_indices.empty()) {
    for (int s : sel.state_indices) {
      if (s < 0 || s >= m.n_states) {
        throw InvalidArgument("state index " + std::to_string(s) + " outside [0, " +
                              std::to_string(m.n_states - 1) + "]");
      }
    }
    windows.push_back(sel.state_indices);
  } else {
    const int frames = sel.frames > 0 ? sel.frames : m.frames;
    const Spacing spacing = sel.spacing.empty() ? m.spacing : spacing_from_string(sel.spacing);
    windows = frame_windows(m.n_states, frames, spacing);
  }
  std::vector<SequenceRef> refs;
  for (const auto& e : m.objects) {
    if (sel.split != "all" && e.split != sel.split) continue;
    for (const auto& w : windows) refs.push_back({e.name, w});
  }
  return refs;
}

SequenceSample load_sequence(const Dataset& data, const SequenceRef& ref) {
  SequenceSample s;
  for (int i : ref.states) {
    s.frames.push_back(read_frame(data.frame_path(ref.object, i)));
    s.frames.back().state_index = i;
  }
  s.check();
  return s;
}

std::vector<JointConfig> sequence_states(const Dataset& data, const SequenceRef& ref) {
  const auto& od = data.object(ref.object);
  std::vector<JointConfig> out;
  for (int i : ref.states) out.push_back(od.states.at(static_cast<std::size_t>(i)));
  return out;
}

ClusterSettings resolve_cluster(const ClusterSettings& settings, const ArticulatedModel& model) {
  ClusterSettings c = settings;
  if (!(c.eps > 0)) c.eps = kEpsRadiusFraction * model.bounding_radius();
  return c;
}

std::vector<SequencePrediction> oracle_segment(const Dataset& data,
                                               const std::vector<SequenceRef>& refs,
                                               TargetMode mode, const ClusterSettings& cluster) {
  std::vector<SequencePrediction> out(refs.size());
  parallel_for(refs.size(), [&](std::size_t i) {
    const auto& model = data.object(refs[i].object).model;
    const auto sample = load_sequence(data, refs[i]);
    const auto field = gt_offsets(sample, model, sequence_states(data, refs[i]),
                                  canonical_config(model), mode);
    const auto gt = ground_truth(sample);
    out[i].ref = refs[i];
    out[i].result = segment_instances(sample, field.target, gt.semantic, resolve_cluster(cluster, model));
  });
  return out;
}

std::vector<SequencePrediction> predict(const Dataset& data, const std::vector<SequenceRef>& refs,
                                        const ModelParams& params, const ClusterSettings& cluster) {
  std::vector<SequencePrediction> out(refs.size());
  parallel_for(refs.size(), [&](std::size_t i) {
    const auto& model = data.object(refs[i].object).model;
    const auto sample = load_sequence(data, refs[i]);
    const auto prepared = prepare_sample(sample, params.kappa);
    const auto cache = forward(params, prepared);
    const auto rows = static_cast<std::size_t>(cache.logits.rows());
    std::vector<SemanticClass> semantic(rows);
    std::vector<Vec3> offsets(rows);
    for (std::size_t r = 0; r < rows; ++r) {
      Eigen::Index best = 0;
      cache.logits.row(static_cast<Eigen::Index>(r)).maxCoeff(&best);
      semantic[r] = class_from_index(static_cast<int>(best));
      offsets[r] = cache.offsets.row(static_cast<Eigen::Index>(r)).transpose();
    }
    out[i].ref = refs[i];
    out[i].result = segment_instances(sample, offsets, semantic, resolve_cluster(cluster, model));
  });
  return out;
}

std::vector<PreparedSample> training_samples(const Dataset& data,
                                             const std::vector<SequenceRef>& refs, TargetMode mode,
                                             int kappa) {
  std::vector<PreparedSample> out(refs.size());
  parallel_for(refs.size(), [&](std::size_t i) {
    const auto& model = data.object(refs[i].object).model;
    const auto sample = load_sequence(data, refs[i]);
    const auto field = gt_offsets(sample, model, sequence_states(data, refs[i]),
                                  canonical_config(model), mode);
    out[i] = prepare_sample(sample, field, kappa);
  });
  return out;
}

void write_predictions(const fs::path& dir, const std::vector<SequencePrediction>& preds,
                       const json& meta) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error("cannot create '" + dir.string() + "': " + ec.message());
  auto seqs = json::array();
  for (const auto& p : preds) {
    const std::string file = p.ref.object + "/" + window_name(p.ref.states) + ".a4dp";
    fs::create_directories(dir / p.ref.object, ec);
    if (ec) throw Error("cannot create '" + (dir / p.ref.object).string() + "': " + ec.message());
    write_prediction(dir / file, p.result);
    seqs.push_back({{"object", p.ref.object}, {"states", p.ref.states}, {"file", file}});
  }
  json j = meta;
  j["format"] = "artic-canon-predictions";
  j["sequences"] = seqs;
  write_json(dir / "predictions.json", j);
}

std::vector<SequencePrediction> read_predictions(const fs::path& dir) {
  const auto j = read_json(dir / "predictions.json");
  if (j.value("format", "") != "artic-canon-predictions") {
    throw FormatError("'" + (dir / "predictions.json").string() +
                      "' is not a prediction index (expected format \"artic-canon-predictions\")");
  }
  std::vector<SequencePrediction> out;
  for (const auto& s : j.at("sequences")) {
    SequencePrediction p;
    p.ref.object = s.at("object").get<std::string>();
    p.ref.states = s.at("states").get<std::vector<int>>();
    p.result = read_prediction(dir / s.at("file").get<std::string>());
    out.push_back(std::move(p));
  }
  return out;
}

EvaluationResult evaluate(const Dataset& data, const std::vector<SequencePrediction>& preds,
                          bool strict_classes) {
  Evaluator overall(strict_classes);
  std::map<std::string, Evaluator> per_template;
  for (const auto& p : preds) {
    const auto gt = ground_truth(load_sequence(data, p.ref));
    if (gt.frames != p.result.frames || gt.points != p.result.points) {
      throw InvalidArgument("prediction for " + p.ref.object + " " + window_name(p.ref.states) +
                            " has " + std::to_string(p.result.frames) + "x" +
                            std::to_string(p.result.points) + " points, ground truth has " +
                            std::to_string(gt.frames) + "x" + std::to_string(gt.points));
    }
    overall.add(gt, p.result);
    const auto& kind = data.object(p.ref.object).entry.template_kind;
    per_template.try_emplace(kind, strict_classes).first->second.add(gt, p.result);
  }
  EvaluationResult r;
  r.overall = overall.report();
  for (const auto& [k, ev] : per_template) r.per_template[k] = ev.report();
  r.sequences = preds.size();
  return r;
}

void to_json(json& j, const EvaluationResult& r) {
  json per = json::object();
  for (const auto& [k, rep] : r.per_template) per[k] = rep;
  j = {{"sequences", r.sequences}, {"overall", r.overall}, {"per_template", per}};
}

std::string format_report(const EvaluationResult& r) {
  std::map<std::string, MetricReport> rows = r.per_template;
  rows["(all)"] = r.overall;
  return format_table(rows);
}

}  // namespace artic
