#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <vector>

#include "artic/network.hpp"

namespace artic {

struct TrainConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double weight_decay = 0.01;
  int warmup_epochs = 10;
  int patience = 10;
  int epochs = 200;
  int batch_size = 1;
  std::uint64_t seed = 42;
  int kappa = 16;
  SemanticLoss semantic_loss = SemanticLoss::Lovasz;
  CanonLossOptions canon;

  /// Throws InvalidArgument unless every rate and count is positive.
  void check() const;
};

/// First and second moments plus the step counter.
struct AdamState {
  std::vector<Matrix> m;
  std::vector<Matrix> v;
  long step = 0;

  static AdamState like(const ModelParams& params);
};

/// Learning rate schedule: linear warmup, then halving on a loss plateau.
class LrSchedule {
 public:
  explicit LrSchedule(const TrainConfig& config);
  /// Rate for 0-based `epoch`.
  double rate(int epoch) const;
  /// Feed the loss of a finished epoch; may halve the post-warmup rate.
  void observe(int epoch, double loss);
  double base() const { return base_; }

 private:
  int warmup_;
  int patience_;
  double base_;
  double best_;
  int stale_ = 0;
};

/// One AdamW update with decoupled weight decay at learning rate `lr`.
void adamw_step(ModelParams& params, const ModelParams& grads, AdamState& state,
                const TrainConfig& config, double lr);

struct EpochRecord {
  int epoch = 0;  ///< 1-based
  double l_sem = 0.0;
  double l_canon = 0.0;
  double lr = 0.0;
  double total() const { return total_loss(l_sem, l_canon); }
};

struct TrainResult {
  ModelParams params;
  std::vector<EpochRecord> curve;
};

/// Mini-batch training over the prepared samples. Sample order is reshuffled every
/// epoch from the seed; batch gradients are summed in a fixed order. Throws
/// DivergenceError carrying the 1-based epoch on a non-finite loss.
TrainResult train(const std::vector<PreparedSample>& samples, const TrainConfig& config,
                  const std::function<void(const EpochRecord&)>& on_epoch = {});

/// CSV with header epoch,l_sem,l_canon,lr.
void write_loss_csv(const std::filesystem::path& path, const std::vector<EpochRecord>& curve);

}  // namespace artic
