#include "amc/nn/losses.hpp"

#include <cmath>
#include <stdexcept>

namespace amc::nn {

namespace {
constexpr double kClip = 1e-12;

void require_same(const Tensor& a, const Tensor& b, const char* who) {
  if (!a.same_shape(b)) throw std::invalid_argument(std::string(who) + ": shape mismatch");
}
}  // namespace

double cross_entropy(const Tensor& y_true, const Tensor& y_pred) {
  require_same(y_true, y_pred, "cross_entropy");
  const std::size_t batch = y_true.dim(0), k = y_true.numel() / batch;
  double total = 0.0;
  for (std::size_t i = 0; i < y_true.numel(); ++i) {
    double p = std::min(std::max(y_pred.data[i], kClip), 1.0 - kClip);
    double y = y_true.data[i];
    total += y * std::log(p) + (1.0 - y) * std::log(1.0 - p);
  }
  return -total / (static_cast<double>(k) * static_cast<double>(batch));
}

Tensor cross_entropy_grad(const Tensor& y_true, const Tensor& y_pred) {
  require_same(y_true, y_pred, "cross_entropy_grad");
  const std::size_t batch = y_true.dim(0), k = y_true.numel() / batch;
  const double scale = 1.0 / (static_cast<double>(k) * static_cast<double>(batch));
  Tensor g(y_pred.shape);
  for (std::size_t i = 0; i < y_true.numel(); ++i) {
    double p = y_pred.data[i];
    if (p <= kClip || p >= 1.0 - kClip) {
      g.data[i] = 0.0;  // clipped region is flat
      continue;
    }
    double y = y_true.data[i];
    g.data[i] = -scale * (y / p - (1.0 - y) / (1.0 - p));
  }
  return g;
}

double mae(const Tensor& target, const Tensor& pred) {
  require_same(target, pred, "mae");
  if (target.numel() % 2 != 0) throw std::invalid_argument("mae: odd element count");
  const std::size_t pairs = target.numel() / 2;
  double total = 0.0;
  for (std::size_t p = 0; p < pairs; ++p) {
    double di = pred.data[2 * p] - target.data[2 * p];
    double dq = pred.data[2 * p + 1] - target.data[2 * p + 1];
    total += std::hypot(di, dq);
  }
  return total / static_cast<double>(pairs);
}

Tensor mae_grad(const Tensor& target, const Tensor& pred) {
  require_same(target, pred, "mae_grad");
  const std::size_t pairs = target.numel() / 2;
  Tensor g(pred.shape);
  for (std::size_t p = 0; p < pairs; ++p) {
    double di = pred.data[2 * p] - target.data[2 * p];
    double dq = pred.data[2 * p + 1] - target.data[2 * p + 1];
    double mod = std::hypot(di, dq);
    if (mod > 0.0) {
      g.data[2 * p] = di / mod / static_cast<double>(pairs);
      g.data[2 * p + 1] = dq / mod / static_cast<double>(pairs);
    }
  }
  return g;
}

}  // namespace amc::nn
