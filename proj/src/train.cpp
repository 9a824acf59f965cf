#include "artic/train.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>

#include "artic/errors.hpp"
#include "artic/scenegen.hpp"

namespace artic {

void TrainConfig::check() const {
  if (!(lr > 0) || !(beta1 > 0 && beta1 < 1) || !(beta2 > 0 && beta2 < 1) || !(epsilon > 0)) {
    throw InvalidArgument("train config: lr, betas and epsilon must be positive (betas below 1)");
  }
  if (weight_decay < 0) throw InvalidArgument("train config: weight decay must be >= 0");
  if (warmup_epochs < 0 || patience < 1 || epochs < 1 || batch_size < 1 || kappa < 1) {
    throw InvalidArgument("train config: epochs, batch size, kappa and patience must be >= 1");
  }
}

AdamState AdamState::like(const ModelParams& params) {
  AdamState s;
  for (const auto& t : params.tensors) {
    s.m.push_back(Matrix::Zero(t.rows(), t.cols()));
    s.v.push_back(Matrix::Zero(t.rows(), t.cols()));
  }
  return s;
}

LrSchedule::LrSchedule(const TrainConfig& config)
    : warmup_(config.warmup_epochs),
      patience_(config.patience),
      base_(config.lr),
      best_(std::numeric_limits<double>::infinity()) {}

double LrSchedule::rate(int epoch) const {
  if (epoch < warmup_) return base_ * static_cast<double>(epoch + 1) / warmup_;
  return base_;
}

void LrSchedule::observe(int epoch, double loss) {
  if (epoch < warmup_) return;
  if (loss < best_) {
    best_ = loss;
    stale_ = 0;
  } else if (++stale_ >= patience_) {
    base_ *= 0.5;
    stale_ = 0;
  }
}

void adamw_step(ModelParams& params, const ModelParams& grads, AdamState& state,
                const TrainConfig& config, double lr) {
  if (grads.tensors.size() != params.tensors.size() || state.m.size() != params.tensors.size()) {
    throw InvalidArgument("adamw_step: parameter, gradient and state layouts differ");
  }
  ++state.step;
  const double c1 = 1.0 - std::pow(config.beta1, static_cast<double>(state.step));
  const double c2 = 1.0 - std::pow(config.beta2, static_cast<double>(state.step));
  for (std::size_t t = 0; t < params.tensors.size(); ++t) {
    auto& p = params.tensors[t];
    const auto& g = grads.tensors[t];
    auto& m = state.m[t];
    auto& v = state.v[t];
    m = config.beta1 * m + (1.0 - config.beta1) * g;
    v = config.beta2 * v + (1.0 - config.beta2) * g.cwiseProduct(g);
    const Matrix update =
        (m / c1).array() / ((v / c2).array().sqrt() + config.epsilon);
    p -= lr * (update + config.weight_decay * p);
  }
}

TrainResult train(const std::vector<PreparedSample>& samples, const TrainConfig& config,
                  const std::function<void(const EpochRecord&)>& on_epoch) {
  config.check();
  if (samples.empty()) throw InvalidArgument("train: empty training set");
  TrainResult result;
  result.params = ModelParams::init(config.seed, config.kappa);
  for (const auto& s : samples) {
    if (s.kappa != std::min<int>(config.kappa, static_cast<int>(s.points))) {
      throw InvalidArgument("train: sample neighborhoods were built with a different kappa");
    }
  }
  AdamState state = AdamState::like(result.params);
  LrSchedule schedule(config);
  std::mt19937_64 rng(mix_seed(config.seed, 0x5EEDu));
  std::vector<std::size_t> order(samples.size());

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (std::size_t i = order.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(uniform01(rng) * static_cast<double>(i));
      std::swap(order[i - 1], order[std::min(j, i - 1)]);
    }
    const double lr = schedule.rate(epoch);
    EpochRecord rec;
    rec.epoch = epoch + 1;
    rec.lr = lr;
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t stop = std::min(order.size(), start + config.batch_size);
      ModelParams batch_grad = result.params.zeros_like();
      for (std::size_t k = start; k < stop; ++k) {
        ModelParams g;
        LossBreakdown loss;
        try {
          loss = evaluate_loss(result.params, samples[order[k]], config.semantic_loss, config.canon, &g);
        } catch (const DivergenceError&) {
          throw DivergenceError(epoch + 1, "non-finite loss on sample " + std::to_string(order[k]));
        }
        rec.l_sem += loss.sem;
        rec.l_canon += loss.canon;
        for (std::size_t t = 0; t < g.tensors.size(); ++t) batch_grad.tensors[t] += g.tensors[t];
      }
      const double scale = 1.0 / static_cast<double>(stop - start);
      for (auto& t : batch_grad.tensors) t *= scale;
      adamw_step(result.params, batch_grad, state, config, lr);
      if (!result.params.all_finite()) {
        throw DivergenceError(epoch + 1, "non-finite parameters after update");
      }
    }
    rec.l_sem /= static_cast<double>(samples.size());
    rec.l_canon /= static_cast<double>(samples.size());
    schedule.observe(epoch, rec.total());
    result.curve.push_back(rec);
    if (on_epoch) on_epoch(rec);
  }
  return result;
}

void write_loss_csv(const std::filesystem::path& path, const std::vector<EpochRecord>& curve) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  out << "epoch,l_sem,l_canon,lr\n";
  char buf[128];
  for (const auto& r : curve) {
    std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g\n", r.epoch, r.l_sem, r.l_canon, r.lr);
    out << buf;
  }
}

}  // namespace artic
