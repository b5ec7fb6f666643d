#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "amc/nn/tensor.hpp"

namespace amc::nn {

// Adadelta: accumulate E[g^2], step by -RMS[dx]/RMS[g] * g, accumulate
// E[dx^2]. No learning-rate hyperparameter.
class Adadelta {
 public:
  explicit Adadelta(double rho = 0.95, double eps = 1e-6) : rho_(rho), eps_(eps) {
    if (!(rho > 0.0 && rho < 1.0)) throw std::invalid_argument("adadelta rho must be in (0,1)");
    if (!(eps > 0.0)) throw std::invalid_argument("adadelta eps must be positive");
  }

  void step(const std::vector<Tensor*>& params, const std::vector<Tensor*>& grads) {
    if (params.size() != grads.size())
      throw std::invalid_argument("adadelta: params/grads mismatch");
    if (eg2_.empty()) {
      eg2_.resize(params.size());
      edx2_.resize(params.size());
      for (std::size_t p = 0; p < params.size(); ++p) {
        eg2_[p].assign(params[p]->numel(), 0.0);
        edx2_[p].assign(params[p]->numel(), 0.0);
      }
    }
    for (std::size_t p = 0; p < params.size(); ++p) {
      auto& x = params[p]->data;
      const auto& g = grads[p]->data;
      auto& eg2 = eg2_[p];
      auto& edx2 = edx2_[p];
      for (std::size_t i = 0; i < x.size(); ++i) {
        eg2[i] = rho_ * eg2[i] + (1.0 - rho_) * g[i] * g[i];
        double dx = -std::sqrt(edx2[i] + eps_) / std::sqrt(eg2[i] + eps_) * g[i];
        edx2[i] = rho_ * edx2[i] + (1.0 - rho_) * dx * dx;
        x[i] += dx;
      }
    }
  }

  void reset() {
    eg2_.clear();
    edx2_.clear();
  }

 private:
  double rho_, eps_;
  std::vector<std::vector<double>> eg2_, edx2_;
};

}  // namespace amc::nn
