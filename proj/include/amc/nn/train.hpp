#pragma once

#include <cstdint>
#include <vector>

#include "amc/nn/layers.hpp"
#include "amc/nn/losses.hpp"

namespace amc::nn {

struct TrainConfig {
  std::size_t batch_size = 100;
  double adadelta_rho = 0.95;
  double adadelta_eps = 1e-6;
  std::size_t max_epochs = 100;
  std::size_t patience = 5;
  double validation_ratio = 0.2;
  std::uint64_t rng_seed = 0;
};

struct Dataset {
  Tensor inputs;   // [count, ...]
  Tensor targets;  // [count, ...]

  std::size_t count() const { return inputs.shape.empty() ? 0 : inputs.dim(0); }
};

enum class LossKind { CrossEntropy, Mae };

struct EpochStats {
  double train_loss = 0.0;
  double train_acc = 0.0;
  double val_loss = 0.0;
  double val_acc = 0.0;
};

struct TrainHistory {
  std::vector<EpochStats> epochs;
  std::size_t best_epoch = 0;  // 0-based index into epochs
};

// Tracks the best validation loss seen; snapshots parameters and batch-norm
// state, restores them when asked.
class EarlyStopper {
 public:
  explicit EarlyStopper(std::size_t patience) : patience_(patience) {}
  // Returns true when training should stop.
  bool observe(double val_loss, Model& model, std::size_t epoch);
  void restore_best(Model& model) const;
  std::size_t best_epoch() const { return best_epoch_; }
  double best_loss() const { return best_loss_; }

 private:
  std::size_t patience_;
  double best_loss_ = std::numeric_limits<double>::infinity();
  std::size_t best_epoch_ = 0;
  std::size_t since_best_ = 0;
  std::vector<Tensor> snapshot_;
};

// Mini-batch Adadelta with a seeded shuffle split, per-epoch reshuffling,
// early stopping on validation loss, and best-epoch restoration. Fully
// deterministic per (dataset, cfg, seed). With no validation rows the
// training loss drives early stopping.
TrainHistory train(Model& model, const Dataset& data, const TrainConfig& cfg, LossKind loss);

// Infer-mode loss and accuracy over a dataset (accuracy is argmax agreement,
// meaningful for classification targets; 0 for MAE).
EpochStats evaluate_model(Model& model, const Dataset& data, LossKind loss,
                          std::size_t batch_size = 256);

// Rows of `data` selected by index, preserving trailing dimensions.
Dataset gather(const Dataset& data, const std::vector<std::size_t>& idx);

}  // namespace amc::nn
