#include "amc/nn/train.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <stdexcept>

#include "amc/nn/adadelta.hpp"

namespace amc::nn {

namespace {

std::vector<std::size_t> row_shape(const Tensor& t) {
  return {t.shape.begin() + 1, t.shape.end()};
}

Tensor gather_rows(const Tensor& t, const std::vector<std::size_t>& idx) {
  auto rs = row_shape(t);
  const std::size_t row = Tensor::numel_of(rs);
  std::vector<std::size_t> shape = {idx.size()};
  shape.insert(shape.end(), rs.begin(), rs.end());
  Tensor out(shape);
  for (std::size_t i = 0; i < idx.size(); ++i)
    std::copy_n(t.data.begin() + idx[i] * row, row, out.data.begin() + i * row);
  return out;
}

double accuracy_of(const Tensor& targets, const Tensor& preds) {
  const std::size_t batch = targets.dim(0), k = targets.numel() / batch;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < batch; ++i) {
    std::size_t at = 0, ap = 0;
    for (std::size_t j = 1; j < k; ++j) {
      if (targets.data[i * k + j] > targets.data[i * k + at]) at = j;
      if (preds.data[i * k + j] > preds.data[i * k + ap]) ap = j;
    }
    if (at == ap) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(batch);
}

double loss_of(LossKind kind, const Tensor& targets, const Tensor& preds) {
  return kind == LossKind::CrossEntropy ? cross_entropy(targets, preds) : mae(targets, preds);
}

Tensor loss_grad_of(LossKind kind, const Tensor& targets, const Tensor& preds) {
  return kind == LossKind::CrossEntropy ? cross_entropy_grad(targets, preds)
                                        : mae_grad(targets, preds);
}

}  // namespace

Dataset gather(const Dataset& data, const std::vector<std::size_t>& idx) {
  return {gather_rows(data.inputs, idx), gather_rows(data.targets, idx)};
}

bool EarlyStopper::observe(double val_loss, Model& model, std::size_t epoch) {
  if (val_loss < best_loss_) {
    best_loss_ = val_loss;
    best_epoch_ = epoch;
    since_best_ = 0;
    snapshot_.clear();
    for (Tensor* t : model.params()) snapshot_.push_back(*t);
    for (Tensor* t : model.state()) snapshot_.push_back(*t);
    return false;
  }
  ++since_best_;
  return since_best_ > patience_;
}

void EarlyStopper::restore_best(Model& model) const {
  if (snapshot_.empty()) return;
  std::size_t k = 0;
  for (Tensor* t : model.params()) *t = snapshot_[k++];
  for (Tensor* t : model.state()) *t = snapshot_[k++];
}

EpochStats evaluate_model(Model& model, const Dataset& data, LossKind loss,
                          std::size_t batch_size) {
  const std::size_t n = data.count();
  if (n == 0) throw std::invalid_argument("evaluate_model: empty dataset");
  double total_loss = 0.0, total_acc = 0.0;
  for (std::size_t start = 0; start < n; start += batch_size) {
    std::vector<std::size_t> idx(std::min(batch_size, n - start));
    std::iota(idx.begin(), idx.end(), start);
    Dataset batch = gather(data, idx);
    Tensor preds = model.infer(batch.inputs);
    const double w = static_cast<double>(idx.size());
    total_loss += loss_of(loss, batch.targets, preds) * w;
    if (loss == LossKind::CrossEntropy) total_acc += accuracy_of(batch.targets, preds) * w;
  }
  EpochStats s;
  s.val_loss = total_loss / static_cast<double>(n);
  s.val_acc = total_acc / static_cast<double>(n);
  return s;
}

TrainHistory train(Model& model, const Dataset& data, const TrainConfig& cfg, LossKind loss) {
  const std::size_t n = data.count();
  if (n == 0) throw std::invalid_argument("train: empty dataset");
  if (data.targets.dim(0) != n) throw std::invalid_argument("train: input/target count mismatch");

  std::mt19937_64 rng(cfg.rng_seed);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);

  std::size_t n_val = static_cast<std::size_t>(cfg.validation_ratio * static_cast<double>(n));
  if (n_val >= n) n_val = n - 1;  // keep at least one training row
  std::vector<std::size_t> train_idx(order.begin(), order.end() - n_val);
  std::vector<std::size_t> val_idx(order.end() - n_val, order.end());
  Dataset val = n_val ? gather(data, val_idx) : Dataset{};

  Adadelta opt(cfg.adadelta_rho, cfg.adadelta_eps);
  EarlyStopper stopper(cfg.patience);
  TrainHistory history;

  for (std::size_t epoch = 0; epoch < cfg.max_epochs; ++epoch) {
    std::shuffle(train_idx.begin(), train_idx.end(), rng);
    double epoch_loss = 0.0, epoch_acc = 0.0;
    for (std::size_t start = 0; start < train_idx.size(); start += cfg.batch_size) {
      std::vector<std::size_t> idx(
          train_idx.begin() + start,
          train_idx.begin() + std::min(start + cfg.batch_size, train_idx.size()));
      Dataset batch = gather(data, idx);
      Tensor preds = model.forward(batch.inputs, Mode::Train, rng);
      const double w = static_cast<double>(idx.size());
      epoch_loss += loss_of(loss, batch.targets, preds) * w;
      if (loss == LossKind::CrossEntropy) epoch_acc += accuracy_of(batch.targets, preds) * w;
      model.zero_grads();
      model.backward(loss_grad_of(loss, batch.targets, preds));
      opt.step(model.params(), model.grads());
    }

    EpochStats stats;
    stats.train_loss = epoch_loss / static_cast<double>(train_idx.size());
    stats.train_acc = epoch_acc / static_cast<double>(train_idx.size());
    if (n_val) {
      EpochStats v = evaluate_model(model, val, loss);
      stats.val_loss = v.val_loss;
      stats.val_acc = v.val_acc;
    } else {
      stats.val_loss = stats.train_loss;
      stats.val_acc = stats.train_acc;
    }
    history.epochs.push_back(stats);
    if (stopper.observe(stats.val_loss, model, epoch)) break;
  }
  stopper.restore_best(model);
  history.best_epoch = stopper.best_epoch();
  return history;
}

}  // namespace amc::nn
