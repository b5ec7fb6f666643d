#pragma once

#include "amc/nn/tensor.hpp"

namespace amc::nn {

// K-averaged binary cross-entropy over the output vector,
//   L = -(1/K) sum_k [ y_k log(p_k) + (1 - y_k) log(1 - p_k) ],
// with predictions clipped to [1e-12, 1 - 1e-12]; mean over the batch.
double cross_entropy(const Tensor& y_true, const Tensor& y_pred);
Tensor cross_entropy_grad(const Tensor& y_true, const Tensor& y_pred);

// Mean absolute error over complex sequences stored as interleaved (I, Q)
// pairs along the last axis; |.| is the per-sample complex modulus of the
// difference. Mean over batch rows and complex samples.
double mae(const Tensor& target, const Tensor& pred);
Tensor mae_grad(const Tensor& target, const Tensor& pred);

}  // namespace amc::nn
