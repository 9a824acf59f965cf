#include "artic/network.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <random>

#include <nlohmann/json.hpp>

#include "artic/errors.hpp"
#include "artic/scenegen.hpp"

namespace artic {

namespace {

constexpr int kShapes[ModelParams::kTensorCount][2] = {
    {ModelParams::kInputDim, ModelParams::kEncoderDim},        {1, ModelParams::kEncoderDim},
    {ModelParams::kEncoderDim, ModelParams::kEncoderDim},      {1, ModelParams::kEncoderDim},
    {2 * ModelParams::kEncoderDim, ModelParams::kTrunkDim},    {1, ModelParams::kTrunkDim},
    {2 * ModelParams::kTrunkDim, ModelParams::kTrunkDim},      {1, ModelParams::kTrunkDim},
    {ModelParams::kTrunkDim, kNumClasses},                     {1, kNumClasses},
    {ModelParams::kTrunkDim, ModelParams::kOffsetDim},         {1, ModelParams::kOffsetDim},
};

constexpr const char* kNames[ModelParams::kTensorCount] = {
    "encoder1.weight", "encoder1.bias", "encoder2.weight", "encoder2.bias",
    "context.weight",  "context.bias",  "temporal.weight", "temporal.bias",
    "semantic.weight", "semantic.bias", "offset.weight",   "offset.bias"};

Matrix silu(const Matrix& z) {
  return z.unaryExpr([](double x) { return x / (1.0 + std::exp(-x)); });
}

Matrix silu_grad(const Matrix& z) {
  return z.unaryExpr([](double x) {
    const double s = 1.0 / (1.0 + std::exp(-x));
    return s * (1.0 + x * (1.0 - s));
  });
}

Matrix affine(const Matrix& x, const Matrix& w, const Matrix& b) {
  Matrix z = x * w;
  z.rowwise() += b.row(0);
  return z;
}

}  // namespace

ModelParams ModelParams::init(std::uint64_t seed, int kappa) {
  if (kappa < 1) throw InvalidArgument("kappa must be >= 1");
  ModelParams p;
  p.kappa = kappa;
  std::mt19937_64 rng(mix_seed(seed, 0x11E7u));
  for (int t = 0; t < kTensorCount; ++t) {
    const int rows = kShapes[t][0], cols = kShapes[t][1];
    Matrix m = Matrix::Zero(rows, cols);
    if (rows > 1) {
      // Glorot uniform, drawn row-major so the stream order is fixed.
      double bound = std::sqrt(6.0 / (rows + cols));
      if (t == kOffsetW) bound *= 0.1;
      for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) m(r, c) = bound * (2.0 * uniform01(rng) - 1.0);
      }
    }
    p.tensors.push_back(std::move(m));
  }
  return p;
}

const char* ModelParams::name(int tensor) { return kNames[tensor]; }

ModelParams ModelParams::zeros_like() const {
  ModelParams z;
  z.kappa = kappa;
  for (const auto& t : tensors) z.tensors.push_back(Matrix::Zero(t.rows(), t.cols()));
  return z;
}

std::size_t ModelParams::parameter_count() const {
  std::size_t n = 0;
  for (const auto& t : tensors) n += static_cast<std::size_t>(t.size());
  return n;
}

bool ModelParams::all_finite() const {
  return std::all_of(tensors.begin(), tensors.end(), [](const Matrix& m) { return m.allFinite(); });
}

PreparedSample prepare_sample(const SequenceSample& sample, int kappa) {
  sample.check();
  PreparedSample ps;
  ps.frames = sample.num_frames();
  ps.points = sample.points_per_frame();
  ps.kappa = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(kappa), ps.points));
  const auto rows = ps.rows();
  ps.input.resize(static_cast<Eigen::Index>(rows), ModelParams::kInputDim);
  ps.labels.resize(rows);
  ps.knn.resize(rows * ps.kappa);
  const double denom = ps.frames > 1 ? static_cast<double>(ps.frames - 1) : 1.0;

  std::vector<double> dist(ps.points);
  std::vector<std::uint32_t> order(ps.points);
  for (std::size_t s = 0; s < ps.frames; ++s) {
    const auto& f = sample.frames[s];
    for (std::size_t n = 0; n < ps.points; ++n) {
      const auto r = static_cast<Eigen::Index>(s * ps.points + n);
      ps.input.row(r) << f.xyz[n].x(), f.xyz[n].y(), f.xyz[n].z(), f.rgb[n].x(), f.rgb[n].y(),
          f.rgb[n].z(), static_cast<double>(s) / denom;
      ps.labels[r] = static_cast<int>(f.semantic[n]);
    }
    for (std::size_t n = 0; n < ps.points; ++n) {
      for (std::size_t m = 0; m < ps.points; ++m) dist[m] = (f.xyz[n] - f.xyz[m]).squaredNorm();
      std::iota(order.begin(), order.end(), 0u);
      std::partial_sort(order.begin(), order.begin() + ps.kappa, order.end(),
                        [&](std::uint32_t a, std::uint32_t b) {
                          return dist[a] != dist[b] ? dist[a] < dist[b] : a < b;
                        });
      for (int k = 0; k < ps.kappa; ++k) {
        ps.knn[(s * ps.points + n) * ps.kappa + k] = static_cast<std::uint32_t>(s * ps.points + order[k]);
      }
    }
  }
  ps.offsets.resize(ps.frames, ps.points);
  return ps;
}

PreparedSample prepare_sample(const SequenceSample& sample, const OffsetField& targets, int kappa) {
  auto ps = prepare_sample(sample, kappa);
  targets.check();
  if (targets.frames != ps.frames || targets.points != ps.points) {
    throw InvalidArgument("offset targets are not congruent with the sample");
  }
  ps.offsets = targets;
  return ps;
}

ForwardCache forward(const ModelParams& params, const PreparedSample& sample) {
  const auto& W = params.tensors;
  const auto rows = static_cast<Eigen::Index>(sample.rows());
  const int kappa = sample.kappa;
  const auto enc = ModelParams::kEncoderDim;
  const auto trunk = ModelParams::kTrunkDim;
  ForwardCache c;
  c.z1 = affine(sample.input, W[ModelParams::kEncoder1W], W[ModelParams::kEncoder1B]);
  c.h1 = silu(c.z1);
  c.z2 = affine(c.h1, W[ModelParams::kEncoder2W], W[ModelParams::kEncoder2B]);
  c.h2 = silu(c.z2);

  c.nbr_mean = Matrix::Zero(rows, enc);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (int k = 0; k < kappa; ++k) c.nbr_mean.row(i) += c.h2.row(sample.knn[i * kappa + k]);
  }
  c.nbr_mean /= static_cast<double>(kappa);

  const auto& wc = W[ModelParams::kContextW];
  c.z_ctx = c.h2 * wc.topRows(enc) + c.nbr_mean * wc.bottomRows(enc);
  c.z_ctx.rowwise() += W[ModelParams::kContextB].row(0);
  c.ctx = silu(c.z_ctx);

  const auto S = static_cast<Eigen::Index>(sample.frames);
  const auto N = static_cast<Eigen::Index>(sample.points);
  Matrix pooled = Matrix::Zero(N, trunk);
  for (Eigen::Index s = 0; s < S; ++s) pooled += c.ctx.middleRows(s * N, N);
  pooled /= static_cast<double>(S);
  c.tmp_mean.resize(rows, trunk);
  for (Eigen::Index s = 0; s < S; ++s) c.tmp_mean.middleRows(s * N, N) = pooled;

  const auto& wt = W[ModelParams::kTemporalW];
  c.z_tmp = c.ctx * wt.topRows(trunk) + c.tmp_mean * wt.bottomRows(trunk);
  c.z_tmp.rowwise() += W[ModelParams::kTemporalB].row(0);
  c.feat = silu(c.z_tmp);

  c.logits = affine(c.feat, W[ModelParams::kSemanticW], W[ModelParams::kSemanticB]);
  c.offsets = affine(c.feat, W[ModelParams::kOffsetW], W[ModelParams::kOffsetB]);
  return c;
}

ModelParams backward(const ModelParams& params, const PreparedSample& sample,
                     const ForwardCache& c, const Matrix& grad_logits, const Matrix& grad_offsets) {
  const auto& W = params.tensors;
  ModelParams g = params.zeros_like();
  auto& G = g.tensors;
  const auto rows = static_cast<Eigen::Index>(sample.rows());
  const int kappa = sample.kappa;
  const auto enc = ModelParams::kEncoderDim;
  const auto trunk = ModelParams::kTrunkDim;
  const auto S = static_cast<Eigen::Index>(sample.frames);
  const auto N = static_cast<Eigen::Index>(sample.points);

  // Heads: each sees only its own upstream gradient.
  G[ModelParams::kSemanticW] = c.feat.transpose() * grad_logits;
  G[ModelParams::kSemanticB] = grad_logits.colwise().sum();
  G[ModelParams::kOffsetW] = c.feat.transpose() * grad_offsets;
  G[ModelParams::kOffsetB] = grad_offsets.colwise().sum();
  const Matrix d_feat = grad_logits * W[ModelParams::kSemanticW].transpose() +
                        grad_offsets * W[ModelParams::kOffsetW].transpose();

  // Temporal block.
  const Matrix d_ztmp = d_feat.cwiseProduct(silu_grad(c.z_tmp));
  G[ModelParams::kTemporalW].topRows(trunk) = c.ctx.transpose() * d_ztmp;
  G[ModelParams::kTemporalW].bottomRows(trunk) = c.tmp_mean.transpose() * d_ztmp;
  G[ModelParams::kTemporalB] = d_ztmp.colwise().sum();
  const auto& wt = W[ModelParams::kTemporalW];
  Matrix d_ctx = d_ztmp * wt.topRows(trunk).transpose();
  const Matrix d_mean = d_ztmp * wt.bottomRows(trunk).transpose();
  Matrix d_pooled = Matrix::Zero(N, trunk);
  for (Eigen::Index s = 0; s < S; ++s) d_pooled += d_mean.middleRows(s * N, N);
  d_pooled /= static_cast<double>(S);
  for (Eigen::Index s = 0; s < S; ++s) d_ctx.middleRows(s * N, N) += d_pooled;

  // Neighborhood context block.
  const Matrix d_zctx = d_ctx.cwiseProduct(silu_grad(c.z_ctx));
  G[ModelParams::kContextW].topRows(enc) = c.h2.transpose() * d_zctx;
  G[ModelParams::kContextW].bottomRows(enc) = c.nbr_mean.transpose() * d_zctx;
  G[ModelParams::kContextB] = d_zctx.colwise().sum();
  const auto& wc = W[ModelParams::kContextW];
  Matrix d_h2 = d_zctx * wc.topRows(enc).transpose();
  const Matrix d_nbr = (d_zctx * wc.bottomRows(enc).transpose()) / static_cast<double>(kappa);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (int k = 0; k < kappa; ++k) d_h2.row(sample.knn[i * kappa + k]) += d_nbr.row(i);
  }

  // Point encoder.
  const Matrix d_z2 = d_h2.cwiseProduct(silu_grad(c.z2));
  G[ModelParams::kEncoder2W] = c.h1.transpose() * d_z2;
  G[ModelParams::kEncoder2B] = d_z2.colwise().sum();
  const Matrix d_z1 =
      (d_z2 * W[ModelParams::kEncoder2W].transpose()).cwiseProduct(silu_grad(c.z1));
  G[ModelParams::kEncoder1W] = sample.input.transpose() * d_z1;
  G[ModelParams::kEncoder1B] = d_z1.colwise().sum();
  return g;
}

SemanticLoss semantic_loss_from_string(const std::string& s) {
  if (s == "lovasz") return SemanticLoss::Lovasz;
  if (s == "ce") return SemanticLoss::CrossEntropy;
  throw InvalidArgument("unknown semantic loss '" + s + "' (expected lovasz or ce)");
}

LossBreakdown evaluate_loss(const ModelParams& params, const PreparedSample& sample,
                            SemanticLoss sem_loss, const CanonLossOptions& canon_options,
                            ModelParams* grads) {
  const auto cache = forward(params, sample);
  const ClassMatrix logits = cache.logits;
  ClassMatrix d_logits;
  LossBreakdown out;
  if (sem_loss == SemanticLoss::Lovasz) {
    const ClassMatrix probs = softmax(logits);
    ClassMatrix d_probs;
    out.sem = lovasz_softmax(probs, sample.labels, grads ? &d_probs : nullptr);
    if (grads) d_logits = softmax_backward(probs, d_probs);
  } else {
    out.sem = cross_entropy(logits, sample.labels, grads ? &d_logits : nullptr);
  }

  OffsetField field = sample.offsets;
  for (std::size_t k = 0; k < field.size(); ++k) {
    const auto r = static_cast<Eigen::Index>(k);
    field.predicted[k] = Vec3(cache.offsets(r, 0), cache.offsets(r, 1), cache.offsets(r, 2));
  }
  std::vector<Vec3> d_pred;
  out.canon = l_canon(field, grads ? &d_pred : nullptr, canon_options);
  if (!std::isfinite(out.sem) || !std::isfinite(out.canon)) {
    throw DivergenceError(0, "non-finite loss (sem=" + std::to_string(out.sem) +
                                  ", canon=" + std::to_string(out.canon) + ")");
  }
  if (grads) {
    Matrix d_off(cache.offsets.rows(), 3);
    for (std::size_t k = 0; k < d_pred.size(); ++k) {
      d_off.row(static_cast<Eigen::Index>(k)) = d_pred[k].transpose();
    }
    *grads = backward(params, sample, cache, Matrix(d_logits), d_off);
  }
  return out;
}

void save_checkpoint(const std::filesystem::path& path, const ModelParams& params) {
  nlohmann::json header;
  header["format"] = "artic-canon-checkpoint";
  header["kappa"] = params.kappa;
  header["dtype"] = "f64-le";
  auto tensors = nlohmann::json::array();
  for (int t = 0; t < ModelParams::kTensorCount; ++t) {
    tensors.push_back({{"name", ModelParams::name(t)},
                       {"shape", {params.tensors[t].rows(), params.tensors[t].cols()}}});
  }
  header["tensors"] = tensors;
  const std::string text = header.dump();

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  out.write("A4DM", 4);
  const std::uint32_t version = kCheckpointVersion;
  const auto len = static_cast<std::uint32_t>(text.size());
  out.write(reinterpret_cast<const char*>(&version), 4);
  out.write(reinterpret_cast<const char*>(&len), 4);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  for (const auto& m : params.tensors) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) {
        const double v = m(r, c);
        out.write(reinterpret_cast<const char*>(&v), 8);
      }
    }
  }
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

ModelParams load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open '" + path.string() + "'");
  const std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (data.size() < 12 || data.compare(0, 4, "A4DM") != 0) {
    throw FormatError("'" + path.string() + "' is not an A4DM checkpoint (expected magic \"A4DM\")");
  }
  std::uint32_t version, len;
  std::memcpy(&version, data.data() + 4, 4);
  std::memcpy(&len, data.data() + 8, 4);
  if (version != kCheckpointVersion) {
    throw FormatError("'" + path.string() + "': A4DM checkpoint version " + std::to_string(version) +
                      " unsupported (expected " + std::to_string(kCheckpointVersion) + ")");
  }
  if (12 + static_cast<std::size_t>(len) > data.size()) throw FormatError("truncated checkpoint header");
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(data.substr(12, len));
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed checkpoint header: ") + e.what());
  }
  ModelParams p;
  p.kappa = header.at("kappa").get<int>();
  const auto& tensors = header.at("tensors");
  if (tensors.size() != ModelParams::kTensorCount) throw FormatError("checkpoint tensor count mismatch");
  std::size_t pos = 12 + len;
  for (int t = 0; t < ModelParams::kTensorCount; ++t) {
    const auto rows = tensors[t].at("shape")[0].get<Eigen::Index>();
    const auto cols = tensors[t].at("shape")[1].get<Eigen::Index>();
    if (rows != kShapes[t][0] || cols != kShapes[t][1] ||
        tensors[t].at("name").get<std::string>() != ModelParams::name(t)) {
      throw FormatError("checkpoint tensor '" + tensors[t].at("name").get<std::string>() +
                        "' has an unexpected name or shape");
    }
    Matrix m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
      for (Eigen::Index c = 0; c < cols; ++c) {
        if (pos + 8 > data.size()) throw FormatError("truncated checkpoint data");
        std::memcpy(&m(r, c), data.data() + pos, 8);
        pos += 8;
      }
    }
    p.tensors.push_back(std::move(m));
  }
  if (pos != data.size()) throw FormatError("trailing bytes in checkpoint");
  return p;
}

}  // namespace artic
