#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "artic/losses.hpp"
#include "artic/point_cloud.hpp"

namespace artic {

using Matrix = Eigen::MatrixXd;

/// Per-point regressor standing in for a 4D backbone: a point encoder, a
/// nearest-neighbor context block, a cross-frame context block and two heads.
/// Weights are stored (fan_in x fan_out); biases are 1 x fan_out rows.
struct ModelParams {
  enum Tensor : int {
    kEncoder1W, kEncoder1B,
    kEncoder2W, kEncoder2B,
    kContextW, kContextB,
    kTemporalW, kTemporalB,
    kSemanticW, kSemanticB,
    kOffsetW, kOffsetB,
    kTensorCount
  };

  static constexpr int kInputDim = 7;  // x y z r g b and the normalized frame index
  static constexpr int kEncoderDim = 64;
  static constexpr int kTrunkDim = 128;
  static constexpr int kOffsetDim = 3;

  std::vector<Matrix> tensors;
  int kappa = 16;

  static ModelParams init(std::uint64_t seed, int kappa = 16);
  static const char* name(int tensor);
  /// Tensors updated only by the semantic loss, only by the offset loss, or by both.
  static bool is_semantic_head(int tensor) { return tensor == kSemanticW || tensor == kSemanticB; }
  static bool is_offset_head(int tensor) { return tensor == kOffsetW || tensor == kOffsetB; }

  ModelParams zeros_like() const;
  std::size_t parameter_count() const;
  bool all_finite() const;
};

/// Network input plus fixed per-sample structure (neighborhoods) and supervision.
struct PreparedSample {
  std::size_t frames = 0;
  std::size_t points = 0;
  Matrix input;                      ///< (S*N) x 7, frame-major rows
  std::vector<std::uint32_t> knn;    ///< (S*N) x kappa neighbor rows within the same frame
  int kappa = 0;
  std::vector<int> labels;           ///< semantic class per point
  OffsetField offsets;               ///< targets and mask; `predicted` is unused here

  std::size_t rows() const { return frames * points; }
};

/// Input features and kappa-nearest neighborhoods (self included, ties by index).
PreparedSample prepare_sample(const SequenceSample& sample, int kappa);
/// As above, with training targets attached.
PreparedSample prepare_sample(const SequenceSample& sample, const OffsetField& targets, int kappa);

struct ForwardCache {
  Matrix z1, h1, z2, h2, nbr_mean, z_ctx, ctx, tmp_mean, z_tmp, feat;
  Matrix logits;   ///< (S*N) x 6
  Matrix offsets;  ///< (S*N) x 3
};

ForwardCache forward(const ModelParams& params, const PreparedSample& sample);

/// Gradients of the loss wrt every parameter, given d loss / d logits and d loss / d offsets.
ModelParams backward(const ModelParams& params, const PreparedSample& sample,
                     const ForwardCache& cache, const Matrix& grad_logits,
                     const Matrix& grad_offsets);

enum class SemanticLoss { Lovasz, CrossEntropy };

SemanticLoss semantic_loss_from_string(const std::string& s);

struct LossBreakdown {
  double sem = 0.0;
  double canon = 0.0;
  double total() const { return total_loss(sem, canon); }
};

/// Forward pass plus both loss terms; fills `grads` (same layout as params) when given.
/// Throws DivergenceError with epoch 0 on a non-finite loss.
LossBreakdown evaluate_loss(const ModelParams& params, const PreparedSample& sample,
                            SemanticLoss sem_loss, const CanonLossOptions& canon_options,
                            ModelParams* grads = nullptr);

/// Checkpoint: "A4DM" | version u32 | header bytes u32 | JSON header | f64 tensors, row-major.
inline constexpr std::uint32_t kCheckpointVersion = 1;
void save_checkpoint(const std::filesystem::path& path, const ModelParams& params);
ModelParams load_checkpoint(const std::filesystem::path& path);

}  // namespace artic
