#pragma once

#include <memory>
#include <random>
#include <string>
#include <vector>

#include "amc/nn/tensor.hpp"
#include "json.hpp"

namespace amc::nn {

// FrozenGrad runs inference semantics (running batch-norm statistics, no
// dropout) while still caching activations, so gradients can flow through a
// frozen model back to its input.
enum class Mode { Train, Infer, FrozenGrad };

// A layer owns its parameters, their gradients, and whatever activations the
// backward pass needs. backward() is only valid after a train-mode forward.
class Layer {
 public:
  virtual ~Layer() = default;
  virtual std::string kind() const = 0;
  virtual Tensor forward(const Tensor& x, Mode mode, std::mt19937_64& rng) = 0;
  virtual Tensor backward(const Tensor& dy) = 0;
  virtual std::vector<Tensor*> params() { return {}; }
  virtual std::vector<Tensor*> grads() { return {}; }
  // Non-trainable persistent state (batch-norm running statistics).
  virtual std::vector<Tensor*> state() { return {}; }
  virtual nlohmann::json spec() const = 0;
};

class Dense : public Layer {
 public:
  Dense(std::size_t in, std::size_t out, bool bias);
  std::string kind() const override { return "dense"; }
  Tensor forward(const Tensor& x, Mode mode, std::mt19937_64& rng) override;
  Tensor backward(const Tensor& dy) override;
  std::vector<Tensor*> params() override;
  std::vector<Tensor*> grads() override;
  nlohmann::json spec() const override;

  Tensor w;  // [in, out]
  Tensor b;  // [out] (empty when bias-less)
  Tensor dw, db;

 private:
  std::size_t in_, out_;
  bool bias_;
  Tensor x_;
};

class Conv2d : public Layer {
 public:
  Conv2d(std::size_t in_c, std::size_t out_c, std::size_t k);
  std::string kind() const override { return "conv2d"; }
  Tensor forward(const Tensor& x, Mode mode, std::mt19937_64& rng) override;
  Tensor backward(const Tensor& dy) override;
  std::vector<Tensor*> params() override { return {&w}; }
  std::vector<Tensor*> grads() override { return {&dw}; }
  nlohmann::json spec() const override;

  Tensor w;  // [out_c, in_c, k, k], valid padding, stride 1, no bias
  Tensor dw;

 private:
  std::size_t in_c_, out_c_, k_;
  Tensor x_;
};

class BatchNorm : public Layer {
 public:
  explicit BatchNorm(std::size_t features, double momentum = 0.9, double eps = 1e-5);
  std::string kind() const override { return "batchnorm"; }
  Tensor forward(const Tensor& x, Mode mode, std::mt19937_64& rng) override;
  Tensor backward(const Tensor& dy) override;
  std::vector<Tensor*> params() override { return {&gamma, &beta}; }
  std::vector<Tensor*> grads() override { return {&dgamma, &dbeta}; }
  std::vector<Tensor*> state() override { return {&running_mean, &running_var}; }
  nlohmann::json spec() const override;

  Tensor gamma, beta, dgamma, dbeta;
  Tensor running_mean, running_var;

 private:
  std::size_t features_;
  double momentum_, eps_;
  Tensor xhat_;
  std::vector<double> inv_std_;
  std::vector<std::size_t> in_shape_;
  bool frozen_ = false;  // last non-infer forward ran in FrozenGrad mode
};

class ReLU : public Layer {
 public:
  std::string kind() const override { return "relu"; }
  Tensor forward(const Tensor& x, Mode mode, std::mt19937_64& rng) override;
  Tensor backward(const Tensor& dy) override;
  nlohmann::json spec() const override { return {{"kind", "relu"}}; }

 private:
  Tensor x_;
};

class Softmax : public Layer {
 public:
  std::string kind() const override { return "softmax"; }
  Tensor forward(const Tensor& x, Mode mode, std::mt19937_64& rng) override;
  Tensor backward(const Tensor& dy) override;
  nlohmann::json spec() const override { return {{"kind", "softmax"}}; }

 private:
  Tensor y_;
};

// Inverted dropout: active only in train mode, scaled so inference is a
// plain pass-through.
class Dropout : public Layer {
 public:
  explicit Dropout(double rate);
  std::string kind() const override { return "dropout"; }
  Tensor forward(const Tensor& x, Mode mode, std::mt19937_64& rng) override;
  Tensor backward(const Tensor& dy) override;
  nlohmann::json spec() const override { return {{"kind", "dropout"}, {"rate", rate_}}; }

 private:
  double rate_;
  bool active_ = false;  // mask applied on the last forward
  std::vector<double> mask_;
};

class GlobalAvgPool : public Layer {
 public:
  std::string kind() const override { return "global_avg_pool"; }
  Tensor forward(const Tensor& x, Mode mode, std::mt19937_64& rng) override;
  Tensor backward(const Tensor& dy) override;
  nlohmann::json spec() const override { return {{"kind", "global_avg_pool"}}; }

 private:
  std::vector<std::size_t> in_shape_;
};

class Flatten : public Layer {
 public:
  std::string kind() const override { return "flatten"; }
  Tensor forward(const Tensor& x, Mode mode, std::mt19937_64& rng) override;
  Tensor backward(const Tensor& dy) override;
  nlohmann::json spec() const override { return {{"kind", "flatten"}}; }

 private:
  std::vector<std::size_t> in_shape_;
};

struct Model {
  std::vector<std::unique_ptr<Layer>> layers;

  Tensor forward(const Tensor& x, Mode mode, std::mt19937_64& rng);
  // Inference without a dropout RNG (no layer draws randomness in Infer).
  Tensor infer(const Tensor& x);
  // Returns dL/dinput; accumulates parameter gradients in each layer.
  Tensor backward(const Tensor& dy);

  std::vector<Tensor*> params();
  std::vector<Tensor*> grads();
  std::vector<Tensor*> state();
  std::size_t param_count();
  void zero_grads();
};

// Fan-in-scaled uniform init, U(-sqrt(6/fan_in), sqrt(6/fan_in)), applied to
// dense and conv weights in layer order; biases stay zero.
void init_params(Model& model, std::uint64_t seed);

std::unique_ptr<Layer> make_layer(const nlohmann::json& spec);

// Structural copy: rebuilds layers from their specs and copies parameters
// and state (not activation caches or gradients).
Model clone_model(Model& model);

}  // namespace amc::nn
