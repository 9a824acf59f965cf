// Command-line driver: generate, oracle-segment, train, predict, evaluate.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#if defined(__GLIBC__)
#include <malloc.h>
#endif

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "artic/errors.hpp"
#include "artic/pipeline.hpp"
#include "artic/train.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct SelectionFlags {
  std::string split;
  int frames = 0;
  std::string spacing;
  std::vector<int> state_indices;

  void add(CLI::App* cmd, const std::string& default_split) {
    split = default_split;
    cmd->add_option("--split", split, "Objects to use: train, test or all")
        ->check(CLI::IsMember({"train", "test", "all"}))
        ->capture_default_str();
    cmd->add_option("--frames", frames, "Frames per sequence (default: manifest)");
    cmd->add_option("--spacing", spacing, "Frame spacing (default: manifest)")
        ->check(CLI::IsMember({"max", "adjacent"}));
    cmd->add_option("--state-indices", state_indices, "Explicit state window, e.g. 12,61,87")
        ->delimiter(',');
  }
  artic::SequenceSelection selection() const { return {split, frames, spacing, state_indices}; }
};

struct ClusterFlags {
  double eps = 0.0;
  int min_pts = 10;
  void add(CLI::App* cmd) {
    cmd->add_option("--eps", eps, "DBSCAN radius in meters (default: 0.05 x bounding radius)");
    cmd->add_option("--min-pts", min_pts, "DBSCAN core threshold")->capture_default_str();
  }
  artic::ClusterSettings settings() const { return {eps, min_pts}; }
};

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw artic::Error("cannot open '" + path.string() + "' for writing");
  out << text;
}

void write_report(const fs::path& dir, const artic::EvaluationResult& r) {
  fs::create_directories(dir);
  write_text(dir / "report.json", json(r).dump(2) + "\n");
  write_text(dir / "report.txt", artic::format_report(r));
}

void log_line(const std::string& s) { std::cerr << s << '\n'; }

}  // namespace

int main(int argc, char** argv) {
#if defined(__GLIBC__)
  // Training reallocates multi-megabyte activations every step; keep them off mmap.
  mallopt(M_MMAP_THRESHOLD, 1 << 30);
  mallopt(M_TRIM_THRESHOLD, 1 << 30);
#endif
  CLI::App app{"Articulated-object 4D panoptic segmentation toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", artic::kToolVersion);

  // generate
  artic::GenerateOptions gen;
  std::string gen_out, gen_subset = "M", gen_spacing = "max";
  auto* g = app.add_subcommand("generate", "Render a synthetic dataset");
  g->add_option("--out", gen_out, "Output directory")->required();
  g->add_option("--subset", gen_subset, "S, D or M")->check(CLI::IsMember({"S", "D", "M"}))->capture_default_str();
  g->add_option("--seed", gen.seed, "Random seed")->capture_default_str();
  g->add_option("--states", gen.n_states, "States per clip")->capture_default_str();
  g->add_option("--views", gen.views, "Camera views per state")->capture_default_str();
  g->add_option("--points", gen.points, "Points per fused frame")->capture_default_str();
  g->add_option("--resolution", gen.resolution, "Render width and height")->capture_default_str();
  g->add_option("--frames", gen.frames, "Frames per sequence sample")->capture_default_str();
  g->add_option("--spacing", gen_spacing, "max or adjacent")->check(CLI::IsMember({"max", "adjacent"}))->capture_default_str();
  g->add_option("--train", gen.train_objects, "Training objects")->capture_default_str();
  g->add_option("--test", gen.test_objects, "Test objects")->capture_default_str();
  g->add_option("--templates", gen.templates, "Restrict to these templates")->delimiter(',');

  // oracle-segment
  std::string or_data, or_out, or_mode = "canonical";
  bool or_strict = false;
  SelectionFlags or_sel;
  ClusterFlags or_cluster;
  auto* o = app.add_subcommand("oracle-segment", "Cluster ground-truth offsets");
  o->add_option("--dataset", or_data, "Dataset directory")->required();
  o->add_option("--out", or_out, "Prediction directory")->required();
  o->add_option("--target-mode", or_mode, "canonical or centroid4d")
      ->check(CLI::IsMember({"canonical", "centroid4d"}))->capture_default_str();
  o->add_flag("--strict-classes", or_strict, "Average IoU over ground-truth classes only");
  or_sel.add(o, "all");
  or_cluster.add(o);

  // train
  std::string tr_data, tr_out, tr_loss = "lovasz", tr_mode = "canonical";
  artic::TrainConfig tc;
  SelectionFlags tr_sel;
  bool tr_quiet = false;
  auto* t = app.add_subcommand("train", "Train the per-point network");
  t->add_option("--dataset", tr_data, "Dataset directory")->required();
  t->add_option("--out", tr_out, "Output directory for checkpoint and loss curve")->required();
  t->add_option("--seed", tc.seed, "Random seed")->capture_default_str();
  t->add_option("--epochs", tc.epochs, "Epochs")->capture_default_str();
  t->add_option("--batch-size", tc.batch_size, "Sequences per step")->capture_default_str();
  t->add_option("--lr", tc.lr, "Peak learning rate")->capture_default_str();
  t->add_option("--weight-decay", tc.weight_decay, "Decoupled weight decay")->capture_default_str();
  t->add_option("--warmup", tc.warmup_epochs, "Warmup epochs")->capture_default_str();
  t->add_option("--patience", tc.patience, "Plateau epochs before halving")->capture_default_str();
  t->add_option("--kappa", tc.kappa, "Neighbors per point")->capture_default_str();
  t->add_option("--loss", tr_loss, "Semantic loss: lovasz or ce")->check(CLI::IsMember({"lovasz", "ce"}))->capture_default_str();
  t->add_option("--target-mode", tr_mode, "canonical or centroid4d")
      ->check(CLI::IsMember({"canonical", "centroid4d"}))->capture_default_str();
  t->add_flag("--quiet", tr_quiet, "No per-epoch log");
  tr_sel.add(t, "train");

  // predict
  std::string pr_data, pr_ckpt, pr_out;
  SelectionFlags pr_sel;
  ClusterFlags pr_cluster;
  auto* p = app.add_subcommand("predict", "Segment sequences with a trained checkpoint");
  p->add_option("--dataset", pr_data, "Dataset directory")->required();
  p->add_option("--checkpoint", pr_ckpt, "A4DM checkpoint")->required();
  p->add_option("--out", pr_out, "Prediction directory")->required();
  pr_sel.add(p, "test");
  pr_cluster.add(p);

  // evaluate
  std::string ev_data, ev_pred, ev_out, ev_ckpt, ev_mode, ev_split = "test", ev_spacing;
  std::vector<int> ev_frames;
  bool ev_strict = false;
  ClusterFlags ev_cluster;
  auto* e = app.add_subcommand("evaluate", "Score predictions, or sweep the frame count");
  e->add_option("--dataset", ev_data, "Dataset directory")->required();
  e->add_option("--pred", ev_pred, "Prediction directory");
  e->add_option("--out", ev_out, "Report directory");
  e->add_flag("--strict-classes", ev_strict, "Average IoU over ground-truth classes only");
  e->add_option("--frames", ev_frames, "Sweep: frame counts, e.g. 1,3")->delimiter(',');
  e->add_option("--checkpoint", ev_ckpt, "Sweep source: a trained checkpoint");
  e->add_option("--target-mode", ev_mode, "Sweep source: oracle offsets in this mode")
      ->check(CLI::IsMember({"canonical", "centroid4d"}));
  e->add_option("--split", ev_split, "Sweep objects: train, test or all")
      ->check(CLI::IsMember({"train", "test", "all"}))->capture_default_str();
  e->add_option("--spacing", ev_spacing, "Sweep spacing (default: manifest)")
      ->check(CLI::IsMember({"max", "adjacent"}));
  ev_cluster.add(e);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*g) {
      gen.subset = artic::subset_from_string(gen_subset);
      gen.spacing = artic::spacing_from_string(gen_spacing);
      const auto m = artic::generate_dataset(gen_out, gen, log_line);
      std::cout << "wrote " << m.objects.size() << " objects to " << gen_out << '\n';
    } else if (*o) {
      const auto data = artic::Dataset::open(or_data);
      const auto mode = artic::target_mode_from_string(or_mode);
      const auto refs = artic::select_sequences(data, or_sel.selection());
      const auto preds = artic::oracle_segment(data, refs, mode, or_cluster.settings());
      artic::write_predictions(or_out, preds, {{"source", "oracle"}, {"target_mode", or_mode}});
      const auto r = artic::evaluate(data, preds, or_strict);
      write_report(or_out, r);
      std::cout << artic::format_report(r);
    } else if (*t) {
      const auto data = artic::Dataset::open(tr_data);
      tc.semantic_loss = artic::semantic_loss_from_string(tr_loss);
      const auto refs = artic::select_sequences(data, tr_sel.selection());
      if (refs.empty()) throw artic::InvalidArgument("no training sequences selected");
      const auto samples =
          artic::training_samples(data, refs, artic::target_mode_from_string(tr_mode), tc.kappa);
      const auto result = artic::train(samples, tc, [&](const artic::EpochRecord& r) {
        if (tr_quiet) return;
        std::fprintf(stderr, "epoch %4d  l_sem %.6f  l_canon %.6f  lr %.3g\n", r.epoch, r.l_sem,
                     r.l_canon, r.lr);
      });
      fs::create_directories(tr_out);
      artic::save_checkpoint(fs::path(tr_out) / "checkpoint.a4dm", result.params);
      artic::write_loss_csv(fs::path(tr_out) / "loss.csv", result.curve);
      const auto& last = result.curve.back();
      std::cout << "trained " << tc.epochs << " epochs on " << samples.size()
                << " sequences; final loss " << last.total() << '\n';
    } else if (*p) {
      const auto data = artic::Dataset::open(pr_data);
      const auto params = artic::load_checkpoint(pr_ckpt);
      const auto refs = artic::select_sequences(data, pr_sel.selection());
      const auto preds = artic::predict(data, refs, params, pr_cluster.settings());
      artic::write_predictions(pr_out, preds, {{"source", "network"}});
      std::cout << "wrote " << preds.size() << " predictions to " << pr_out << '\n';
    } else if (*e) {
      const auto data = artic::Dataset::open(ev_data);
      if (ev_frames.empty()) {
        if (ev_pred.empty()) throw artic::InvalidArgument("evaluate needs --pred or a --frames sweep");
        const auto r = artic::evaluate(data, artic::read_predictions(ev_pred), ev_strict);
        if (!ev_out.empty()) write_report(ev_out, r);
        std::cout << artic::format_report(r);
      } else {
        if (ev_ckpt.empty() == ev_mode.empty()) {
          throw artic::InvalidArgument("a --frames sweep needs exactly one of --checkpoint or --target-mode");
        }
        if (ev_out.empty()) throw artic::InvalidArgument("a --frames sweep needs --out");
        fs::create_directories(ev_out);
        std::ofstream csv(fs::path(ev_out) / "sweep.csv", std::ios::trunc);
        csv << "frames,sequences,s_cls,s_assoc,lstq\n";
        artic::ModelParams params;
        if (!ev_ckpt.empty()) params = artic::load_checkpoint(ev_ckpt);
        for (int f : ev_frames) {
          const auto refs = artic::select_sequences(data, {ev_split, f, ev_spacing, {}});
          const auto preds =
              ev_ckpt.empty()
                  ? artic::oracle_segment(data, refs, artic::target_mode_from_string(ev_mode), ev_cluster.settings())
                  : artic::predict(data, refs, params, ev_cluster.settings());
          const auto r = artic::evaluate(data, preds, ev_strict);
          char buf[160];
          std::snprintf(buf, sizeof(buf), "%d,%zu,%.17g,%.17g,%.17g\n", f, r.sequences,
                        r.overall.s_cls, r.overall.s_assoc, r.overall.lstq);
          csv << buf;
          std::cout << "frames " << f << '\n' << artic::format_report(r);
        }
      }
    }
  } catch (const artic::Error& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 2;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 1;
  }
  return 0;
}
