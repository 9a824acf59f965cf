#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <nlohmann/json.hpp>

#include "artic/errors.hpp"
#include "artic/losses.hpp"
#include "artic/metrics.hpp"
#include "artic/pipeline.hpp"
#include "artic/sensing.hpp"
#include "artic/trajectory.hpp"

namespace py = pybind11;
using namespace artic;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;
using IntArray = py::array_t<std::int64_t, py::array::c_style | py::array::forcecast>;

std::vector<Vec3> to_points(const Array& a) {
  if (a.ndim() != 2 || a.shape(1) != 3) throw InvalidArgument("expected an (N, 3) array");
  auto r = a.unchecked<2>();
  std::vector<Vec3> out(static_cast<std::size_t>(a.shape(0)));
  for (py::ssize_t i = 0; i < a.shape(0); ++i) out[i] = Vec3(r(i, 0), r(i, 1), r(i, 2));
  return out;
}

Array from_points(const std::vector<Vec3>& pts) {
  Array a({static_cast<py::ssize_t>(pts.size()), py::ssize_t{3}});
  auto w = a.mutable_unchecked<2>();
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (int d = 0; d < 3; ++d) w(i, d) = pts[i][d];
  return a;
}

SegmentationResult to_result(const IntArray& semantic, const IntArray& instance, std::size_t frames) {
  if (semantic.ndim() != 1 || instance.ndim() != 1 || semantic.size() != instance.size())
    throw InvalidArgument("semantic and instance must be 1-d arrays of equal length");
  if (frames == 0 || semantic.size() % frames != 0) throw InvalidArgument("length must be a multiple of frames");
  SegmentationResult r;
  r.frames = frames;
  r.points = static_cast<std::size_t>(semantic.size()) / frames;
  auto s = semantic.unchecked<1>();
  auto k = instance.unchecked<1>();
  for (py::ssize_t i = 0; i < semantic.size(); ++i) {
    if (s(i) < 0 || s(i) >= kNumClasses) throw InvalidArgument("semantic label out of range");
    if (k(i) < 0) throw InvalidArgument("instance ids must be non-negative");
    r.semantic.push_back(static_cast<SemanticClass>(s(i)));
    r.instance.push_back(static_cast<std::uint32_t>(k(i)));
  }
  r.check();
  return r;
}

std::vector<SequenceRef> refs_for(const Dataset& ds, const std::string& split, int frames,
                                  const std::vector<int>& states) {
  SequenceSelection sel;
  sel.split = split;
  sel.frames = frames;
  sel.state_indices = states;
  return select_sequences(ds, sel);
}

std::string report_json(const EvaluationResult& r) { return nlohmann::json(r).dump(); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Articulated-object 4D panoptic segmentation toolkit";

  py::register_exception<Error>(m, "ArticError", PyExc_RuntimeError);

  m.def("lstq", &lstq, py::arg("s_cls"), py::arg("s_assoc"));

  m.def(
      "s_cls",
      [](const IntArray& gs, const IntArray& gi, const IntArray& ps, const IntArray& pi, std::size_t frames,
         bool strict) { return s_cls(to_result(gs, gi, frames), to_result(ps, pi, frames), nullptr, strict); },
      py::arg("gt_semantic"), py::arg("gt_instance"), py::arg("pred_semantic"), py::arg("pred_instance"),
      py::arg("frames") = 1, py::arg("strict_classes") = false);

  m.def(
      "s_assoc",
      [](const IntArray& gs, const IntArray& gi, const IntArray& ps, const IntArray& pi, std::size_t frames) {
        return s_assoc(to_result(gs, gi, frames), to_result(ps, pi, frames));
      },
      py::arg("gt_semantic"), py::arg("gt_instance"), py::arg("pred_semantic"), py::arg("pred_instance"),
      py::arg("frames") = 1);

  m.def(
      "farthest_point_sampling",
      [](const Array& points, std::size_t count) {
        const auto pts = to_points(points);
        return farthest_point_sampling(pts, count);
      },
      py::arg("points"), py::arg("count"), "Indices of the greedy farthest-point subset.");

  m.def(
      "lovasz_softmax",
      [](const Array& probs, const IntArray& labels) {
        if (probs.ndim() != 2 || labels.ndim() != 1 || probs.shape(0) != labels.size())
          throw InvalidArgument("expected (N, C) probabilities and N labels");
        ClassMatrix p = Eigen::Map<const ClassMatrix>(probs.data(), probs.shape(0), probs.shape(1));
        std::vector<int> y(labels.data(), labels.data() + labels.size());
        ClassMatrix g;
        const double loss = lovasz_softmax(p, y, &g);
        Array grad({g.rows(), g.cols()});
        std::copy(g.data(), g.data() + g.size(), grad.mutable_data());
        return py::make_tuple(loss, grad);
      },
      py::arg("probs"), py::arg("labels"), "Loss and gradient with respect to the probabilities.");

  m.def(
      "l_canon",
      [](const Array& predicted, const Array& target, const py::array_t<bool>& mask) {
        OffsetField f;
        const auto pred = to_points(predicted);
        f.resize(1, pred.size());
        f.predicted = pred;
        f.target = to_points(target);
        if (f.target.size() != pred.size() || static_cast<std::size_t>(mask.size()) != pred.size())
          throw InvalidArgument("predicted, target and mask must have the same length");
        for (std::size_t i = 0; i < pred.size(); ++i) f.mask[i] = mask.at(i);
        std::vector<Vec3> g;
        const double loss = l_canon(f, &g);
        return py::make_tuple(loss, from_points(g));
      },
      py::arg("predicted"), py::arg("target"), py::arg("mask"));

  m.def(
      "trajectory",
      [](const std::string& kind, double q0, double qf, double duration, double exponent, bool inverted, int n) {
        TrajectoryProfile p;
        if (kind == "power") p.kind = ProfileKind::Power;
        else if (kind == "sigmoid") p.kind = ProfileKind::Sigmoid;
        else throw InvalidArgument("unknown profile kind '" + kind + "' (expected power or sigmoid)");
        p.q0 = q0;
        p.qf = qf;
        p.duration = duration;
        p.exponent = exponent;
        p.inverted = inverted;
        std::vector<double> out;
        for (const auto& q : sample_states({p}, n)) out.push_back(q[0]);
        return out;
      },
      py::arg("kind"), py::arg("q0"), py::arg("qf"), py::arg("duration") = 1.0, py::arg("exponent") = 1.0,
      py::arg("inverted") = false, py::arg("n") = 100, "Joint values at n evenly spaced times.");

  m.def(
      "generate",
      [](const std::string& out, const std::string& subset, std::uint64_t seed, int states, int views,
         int resolution, std::size_t points, int frames, int train, int test,
         const std::vector<std::string>& templates) {
        GenerateOptions o;
        o.subset = subset_from_string(subset);
        o.seed = seed;
        o.n_states = states;
        o.views = views;
        o.resolution = resolution;
        o.points = points;
        o.frames = frames;
        o.train_objects = train;
        o.test_objects = test;
        o.templates = templates;
        py::gil_scoped_release release;
        return nlohmann::json(generate_dataset(out, o)).dump();
      },
      py::arg("out"), py::arg("subset") = "M", py::arg("seed") = 42, py::arg("states") = 100, py::arg("views") = 18,
      py::arg("resolution") = 128, py::arg("points") = 2048, py::arg("frames") = 3, py::arg("train") = 8,
      py::arg("test") = 4, py::arg("templates") = std::vector<std::string>{});

  m.def(
      "oracle_segment",
      [](const std::string& dataset, const std::string& out, const std::string& target_mode,
         const std::string& split, int frames, const std::vector<int>& states, bool strict) {
        py::gil_scoped_release release;
        const auto ds = Dataset::open(dataset);
        const auto mode = target_mode_from_string(target_mode);
        const auto preds = oracle_segment(ds, refs_for(ds, split, frames, states), mode, {});
        write_predictions(out, preds, {{"source", "oracle"}, {"target_mode", to_string(mode)}});
        return report_json(evaluate(ds, preds, strict));
      },
      py::arg("dataset"), py::arg("out"), py::arg("target_mode") = "canonical", py::arg("split") = "all",
      py::arg("frames") = 0, py::arg("state_indices") = std::vector<int>{}, py::arg("strict_classes") = false);

  m.def(
      "evaluate",
      [](const std::string& dataset, const std::string& pred, bool strict) {
        py::gil_scoped_release release;
        return report_json(evaluate(Dataset::open(dataset), read_predictions(pred), strict));
      },
      py::arg("dataset"), py::arg("pred"), py::arg("strict_classes") = false);

  m.attr("__version__") = kToolVersion;
}
