#include "amc/nn/layers.hpp"

#include <cmath>
#include <stdexcept>

namespace amc::nn {

namespace {

void require_rank(const Tensor& x, std::size_t r, const char* who) {
  if (x.rank() != r)
    throw std::invalid_argument(std::string(who) + ": expected rank " + std::to_string(r) +
                                " input, got " + std::to_string(x.rank()));
}

}  // namespace

// ---- Dense ----

Dense::Dense(std::size_t in, std::size_t out, bool bias) : in_(in), out_(out), bias_(bias) {
  w = Tensor({in, out});
  dw = Tensor({in, out});
  if (bias_) {
    b = Tensor({out});
    db = Tensor({out});
  }
}

Tensor Dense::forward(const Tensor& x, Mode mode, std::mt19937_64&) {
  require_rank(x, 2, "dense");
  if (x.dim(1) != in_) throw std::invalid_argument("dense: input width mismatch");
  if (mode != Mode::Infer) x_ = x;
  const std::size_t batch = x.dim(0);
  Tensor y({batch, out_});
  for (std::size_t i = 0; i < batch; ++i) {
    double* yrow = &y.data[i * out_];
    if (bias_)
      for (std::size_t j = 0; j < out_; ++j) yrow[j] = b(j);
    const double* xrow = &x.data[i * in_];
    for (std::size_t k = 0; k < in_; ++k) {
      const double xv = xrow[k];
      const double* wrow = &w.data[k * out_];
      for (std::size_t j = 0; j < out_; ++j) yrow[j] += xv * wrow[j];
    }
  }
  return y;
}

Tensor Dense::backward(const Tensor& dy) {
  const std::size_t batch = dy.dim(0);
  Tensor dx({batch, in_});
  for (std::size_t i = 0; i < batch; ++i) {
    const double* dyrow = &dy.data[i * out_];
    const double* xrow = &x_.data[i * in_];
    double* dxrow = &dx.data[i * in_];
    for (std::size_t k = 0; k < in_; ++k) {
      const double* wrow = &w.data[k * out_];
      double* dwrow = &dw.data[k * out_];
      double acc = 0.0;
      for (std::size_t j = 0; j < out_; ++j) {
        acc += dyrow[j] * wrow[j];
        dwrow[j] += xrow[k] * dyrow[j];
      }
      dxrow[k] = acc;
    }
    if (bias_)
      for (std::size_t j = 0; j < out_; ++j) db(j) += dyrow[j];
  }
  return dx;
}

std::vector<Tensor*> Dense::params() {
  if (bias_) return {&w, &b};
  return {&w};
}

std::vector<Tensor*> Dense::grads() {
  if (bias_) return {&dw, &db};
  return {&dw};
}

nlohmann::json Dense::spec() const {
  return {{"kind", "dense"}, {"in", in_}, {"out", out_}, {"bias", bias_}};
}

// ---- Conv2d ----

Conv2d::Conv2d(std::size_t in_c, std::size_t out_c, std::size_t k)
    : in_c_(in_c), out_c_(out_c), k_(k) {
  w = Tensor({out_c, in_c, k, k});
  dw = Tensor({out_c, in_c, k, k});
}

Tensor Conv2d::forward(const Tensor& x, Mode mode, std::mt19937_64&) {
  require_rank(x, 4, "conv2d");
  if (x.dim(1) != in_c_) throw std::invalid_argument("conv2d: channel count mismatch");
  if (x.dim(2) < k_ || x.dim(3) < k_)
    throw std::invalid_argument("conv2d: input smaller than kernel");
  if (mode != Mode::Infer) x_ = x;
  const std::size_t batch = x.dim(0), h = x.dim(2), wd = x.dim(3);
  const std::size_t ho = h - k_ + 1, wo = wd - k_ + 1;
  Tensor y({batch, out_c_, ho, wo});
  for (std::size_t bi = 0; bi < batch; ++bi)
    for (std::size_t o = 0; o < out_c_; ++o)
      for (std::size_t c = 0; c < in_c_; ++c)
        for (std::size_t a = 0; a < k_; ++a)
          for (std::size_t d = 0; d < k_; ++d) {
            const double wv = w(o, c, a, d);
            for (std::size_t i = 0; i < ho; ++i) {
              const double* xr = &x.data[((bi * in_c_ + c) * h + i + a) * wd + d];
              double* yr = &y.data[((bi * out_c_ + o) * ho + i) * wo];
              for (std::size_t j = 0; j < wo; ++j) yr[j] += wv * xr[j];
            }
          }
  return y;
}

Tensor Conv2d::backward(const Tensor& dy) {
  const std::size_t batch = x_.dim(0), h = x_.dim(2), wd = x_.dim(3);
  const std::size_t ho = h - k_ + 1, wo = wd - k_ + 1;
  Tensor dx({batch, in_c_, h, wd});
  for (std::size_t bi = 0; bi < batch; ++bi)
    for (std::size_t o = 0; o < out_c_; ++o)
      for (std::size_t c = 0; c < in_c_; ++c)
        for (std::size_t a = 0; a < k_; ++a)
          for (std::size_t d = 0; d < k_; ++d) {
            const double wv = w(o, c, a, d);
            double acc = 0.0;
            for (std::size_t i = 0; i < ho; ++i) {
              const double* xr = &x_.data[((bi * in_c_ + c) * h + i + a) * wd + d];
              const double* dyr = &dy.data[((bi * out_c_ + o) * ho + i) * wo];
              double* dxr = &dx.data[((bi * in_c_ + c) * h + i + a) * wd + d];
              for (std::size_t j = 0; j < wo; ++j) {
                acc += dyr[j] * xr[j];
                dxr[j] += dyr[j] * wv;
              }
            }
            dw(o, c, a, d) += acc;
          }
  return dx;
}

nlohmann::json Conv2d::spec() const {
  return {{"kind", "conv2d"}, {"in_c", in_c_}, {"out_c", out_c_}, {"k", k_}};
}

// ---- BatchNorm ----

BatchNorm::BatchNorm(std::size_t features, double momentum, double eps)
    : features_(features), momentum_(momentum), eps_(eps) {
  gamma = Tensor({features});
  gamma.fill(1.0);
  beta = Tensor({features});
  dgamma = Tensor({features});
  dbeta = Tensor({features});
  running_mean = Tensor({features});
  running_var = Tensor({features});
  running_var.fill(1.0);
}

Tensor BatchNorm::forward(const Tensor& x, Mode mode, std::mt19937_64&) {
  if (x.rank() != 2 && x.rank() != 4)
    throw std::invalid_argument("batchnorm: expected rank-2 or rank-4 input");
  if (x.dim(1) != features_) throw std::invalid_argument("batchnorm: feature count mismatch");
  in_shape_ = x.shape;
  const std::size_t spatial = x.rank() == 4 ? x.dim(2) * x.dim(3) : 1;
  const std::size_t batch = x.dim(0);
  const std::size_t m = batch * spatial;  // samples per feature

  Tensor y(x.shape);
  if (mode != Mode::Train) {
    // Affine transform from the running statistics. FrozenGrad additionally
    // caches the normalized input so backward can run without batch stats.
    if (mode == Mode::FrozenGrad) {
      frozen_ = true;
      xhat_ = Tensor(x.shape);
      inv_std_.assign(features_, 0.0);
      for (std::size_t c = 0; c < features_; ++c)
        inv_std_[c] = 1.0 / std::sqrt(running_var(c) + eps_);
    }
    for (std::size_t b = 0; b < batch; ++b)
      for (std::size_t c = 0; c < features_; ++c) {
        const double istd = 1.0 / std::sqrt(running_var(c) + eps_);
        const double scale = gamma(c) * istd;
        const double shift = beta(c) - running_mean(c) * scale;
        const std::size_t base = (b * features_ + c) * spatial;
        for (std::size_t s = 0; s < spatial; ++s) {
          y.data[base + s] = x.data[base + s] * scale + shift;
          if (mode == Mode::FrozenGrad)
            xhat_.data[base + s] = (x.data[base + s] - running_mean(c)) * istd;
        }
      }
    return y;
  }

  frozen_ = false;
  xhat_ = Tensor(x.shape);
  inv_std_.assign(features_, 0.0);
  for (std::size_t c = 0; c < features_; ++c) {
    double mean = 0.0;
    for (std::size_t b = 0; b < batch; ++b) {
      const std::size_t base = (b * features_ + c) * spatial;
      for (std::size_t s = 0; s < spatial; ++s) mean += x.data[base + s];
    }
    mean /= static_cast<double>(m);
    double var = 0.0;
    for (std::size_t b = 0; b < batch; ++b) {
      const std::size_t base = (b * features_ + c) * spatial;
      for (std::size_t s = 0; s < spatial; ++s) {
        double d = x.data[base + s] - mean;
        var += d * d;
      }
    }
    var /= static_cast<double>(m);  // biased, matching the running estimate
    const double istd = 1.0 / std::sqrt(var + eps_);
    inv_std_[c] = istd;
    for (std::size_t b = 0; b < batch; ++b) {
      const std::size_t base = (b * features_ + c) * spatial;
      for (std::size_t s = 0; s < spatial; ++s) {
        double xh = (x.data[base + s] - mean) * istd;
        xhat_.data[base + s] = xh;
        y.data[base + s] = gamma(c) * xh + beta(c);
      }
    }
    running_mean(c) = momentum_ * running_mean(c) + (1.0 - momentum_) * mean;
    running_var(c) = momentum_ * running_var(c) + (1.0 - momentum_) * var;
  }
  return y;
}

Tensor BatchNorm::backward(const Tensor& dy) {
  const std::size_t batch = in_shape_[0];
  const std::size_t spatial = in_shape_.size() == 4 ? in_shape_[2] * in_shape_[3] : 1;
  const double m = static_cast<double>(batch * spatial);
  Tensor dx(dy.shape);
  if (frozen_) {
    // Running statistics are constants here, so the layer is plain affine.
    for (std::size_t c = 0; c < features_; ++c) {
      const double scale = gamma(c) * inv_std_[c];
      double sum_dy = 0.0, sum_dy_xhat = 0.0;
      for (std::size_t b = 0; b < batch; ++b) {
        const std::size_t base = (b * features_ + c) * spatial;
        for (std::size_t s = 0; s < spatial; ++s) {
          sum_dy += dy.data[base + s];
          sum_dy_xhat += dy.data[base + s] * xhat_.data[base + s];
          dx.data[base + s] = dy.data[base + s] * scale;
        }
      }
      dgamma(c) += sum_dy_xhat;
      dbeta(c) += sum_dy;
    }
    return dx;
  }
  for (std::size_t c = 0; c < features_; ++c) {
    double sum_dy = 0.0, sum_dy_xhat = 0.0;
    for (std::size_t b = 0; b < batch; ++b) {
      const std::size_t base = (b * features_ + c) * spatial;
      for (std::size_t s = 0; s < spatial; ++s) {
        sum_dy += dy.data[base + s];
        sum_dy_xhat += dy.data[base + s] * xhat_.data[base + s];
      }
    }
    dgamma(c) += sum_dy_xhat;
    dbeta(c) += sum_dy;
    const double scale = gamma(c) * inv_std_[c] / m;
    for (std::size_t b = 0; b < batch; ++b) {
      const std::size_t base = (b * features_ + c) * spatial;
      for (std::size_t s = 0; s < spatial; ++s)
        dx.data[base + s] = scale * (m * dy.data[base + s] - sum_dy -
                                     xhat_.data[base + s] * sum_dy_xhat);
    }
  }
  return dx;
}

nlohmann::json BatchNorm::spec() const {
  return {{"kind", "batchnorm"}, {"features", features_}, {"momentum", momentum_}, {"eps", eps_}};
}

// ---- ReLU ----

Tensor ReLU::forward(const Tensor& x, Mode mode, std::mt19937_64&) {
  if (mode != Mode::Infer) x_ = x;
  Tensor y(x.shape);
  for (std::size_t i = 0; i < x.numel(); ++i) y.data[i] = x.data[i] > 0.0 ? x.data[i] : 0.0;
  return y;
}

Tensor ReLU::backward(const Tensor& dy) {
  Tensor dx(dy.shape);
  for (std::size_t i = 0; i < dy.numel(); ++i) dx.data[i] = x_.data[i] > 0.0 ? dy.data[i] : 0.0;
  return dx;
}

// ---- Softmax ----

Tensor Softmax::forward(const Tensor& x, Mode mode, std::mt19937_64&) {
  require_rank(x, 2, "softmax");
  Tensor y(x.shape);
  const std::size_t batch = x.dim(0), k = x.dim(1);
  for (std::size_t i = 0; i < batch; ++i) {
    const double* xr = &x.data[i * k];
    double* yr = &y.data[i * k];
    double mx = xr[0];
    for (std::size_t j = 1; j < k; ++j) mx = std::max(mx, xr[j]);
    double sum = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      yr[j] = std::exp(xr[j] - mx);
      sum += yr[j];
    }
    for (std::size_t j = 0; j < k; ++j) yr[j] /= sum;
  }
  if (mode != Mode::Infer) y_ = y;
  return y;
}

Tensor Softmax::backward(const Tensor& dy) {
  Tensor dx(dy.shape);
  const std::size_t batch = dy.dim(0), k = dy.dim(1);
  for (std::size_t i = 0; i < batch; ++i) {
    const double* dyr = &dy.data[i * k];
    const double* yr = &y_.data[i * k];
    double dot = 0.0;
    for (std::size_t j = 0; j < k; ++j) dot += dyr[j] * yr[j];
    double* dxr = &dx.data[i * k];
    for (std::size_t j = 0; j < k; ++j) dxr[j] = yr[j] * (dyr[j] - dot);
  }
  return dx;
}

// ---- Dropout ----

Dropout::Dropout(double rate) : rate_(rate) {
  if (rate < 0.0 || rate >= 1.0) throw std::invalid_argument("dropout rate must be in [0, 1)");
}

Tensor Dropout::forward(const Tensor& x, Mode mode, std::mt19937_64& rng) {
  if (mode == Mode::Infer) return x;  // no member writes; infer stays parallel-safe
  if (mode == Mode::FrozenGrad || rate_ == 0.0) {
    active_ = false;
    return x;
  }
  active_ = true;
  mask_.assign(x.numel(), 0.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double keep = 1.0 - rate_;
  Tensor y(x.shape);
  for (std::size_t i = 0; i < x.numel(); ++i) {
    mask_[i] = u(rng) < keep ? 1.0 / keep : 0.0;
    y.data[i] = x.data[i] * mask_[i];
  }
  return y;
}

Tensor Dropout::backward(const Tensor& dy) {
  if (!active_) return dy;
  Tensor dx(dy.shape);
  for (std::size_t i = 0; i < dy.numel(); ++i) dx.data[i] = dy.data[i] * mask_[i];
  return dx;
}

// ---- GlobalAvgPool ----

Tensor GlobalAvgPool::forward(const Tensor& x, Mode mode, std::mt19937_64&) {
  require_rank(x, 4, "global_avg_pool");
  if (mode != Mode::Infer) in_shape_ = x.shape;
  const std::size_t batch = x.dim(0), c = x.dim(1), spatial = x.dim(2) * x.dim(3);
  Tensor y({batch, c});
  for (std::size_t b = 0; b < batch; ++b)
    for (std::size_t ch = 0; ch < c; ++ch) {
      const std::size_t base = (b * c + ch) * spatial;
      double acc = 0.0;
      for (std::size_t s = 0; s < spatial; ++s) acc += x.data[base + s];
      y(b, ch) = acc / static_cast<double>(spatial);
    }
  return y;
}

Tensor GlobalAvgPool::backward(const Tensor& dy) {
  const std::size_t spatial = in_shape_[2] * in_shape_[3];
  Tensor dx(in_shape_);
  const std::size_t batch = in_shape_[0], c = in_shape_[1];
  for (std::size_t b = 0; b < batch; ++b)
    for (std::size_t ch = 0; ch < c; ++ch) {
      const double g = dy(b, ch) / static_cast<double>(spatial);
      const std::size_t base = (b * c + ch) * spatial;
      for (std::size_t s = 0; s < spatial; ++s) dx.data[base + s] = g;
    }
  return dx;
}

// ---- Flatten ----

Tensor Flatten::forward(const Tensor& x, Mode mode, std::mt19937_64&) {
  if (mode != Mode::Infer) in_shape_ = x.shape;
  Tensor y({x.dim(0), x.numel() / x.dim(0)});
  y.data = x.data;
  return y;
}

Tensor Flatten::backward(const Tensor& dy) {
  Tensor dx(in_shape_);
  dx.data = dy.data;
  return dx;
}

// ---- Model ----

Tensor Model::forward(const Tensor& x, Mode mode, std::mt19937_64& rng) {
  Tensor t = x;
  for (auto& layer : layers) t = layer->forward(t, mode, rng);
  return t;
}

Tensor Model::infer(const Tensor& x) {
  std::mt19937_64 rng(0);  // unused in Infer mode
  return forward(x, Mode::Infer, rng);
}

Tensor Model::backward(const Tensor& dy) {
  Tensor g = dy;
  for (auto it = layers.rbegin(); it != layers.rend(); ++it) g = (*it)->backward(g);
  return g;
}

std::vector<Tensor*> Model::params() {
  std::vector<Tensor*> out;
  for (auto& l : layers)
    for (Tensor* t : l->params()) out.push_back(t);
  return out;
}

std::vector<Tensor*> Model::grads() {
  std::vector<Tensor*> out;
  for (auto& l : layers)
    for (Tensor* t : l->grads()) out.push_back(t);
  return out;
}

std::vector<Tensor*> Model::state() {
  std::vector<Tensor*> out;
  for (auto& l : layers)
    for (Tensor* t : l->state()) out.push_back(t);
  return out;
}

std::size_t Model::param_count() {
  std::size_t n = 0;
  for (Tensor* t : params()) n += t->numel();
  return n;
}

void Model::zero_grads() {
  for (Tensor* g : grads()) g->fill(0.0);
}

void init_params(Model& model, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (auto& layer : model.layers) {
    if (auto* d = dynamic_cast<Dense*>(layer.get())) {
      const double limit = std::sqrt(6.0 / static_cast<double>(d->w.dim(0)));
      std::uniform_real_distribution<double> u(-limit, limit);
      for (auto& v : d->w.data) v = u(rng);
    } else if (auto* c = dynamic_cast<Conv2d*>(layer.get())) {
      const double fan_in =
          static_cast<double>(c->w.dim(1) * c->w.dim(2) * c->w.dim(3));
      const double limit = std::sqrt(6.0 / fan_in);
      std::uniform_real_distribution<double> u(-limit, limit);
      for (auto& v : c->w.data) v = u(rng);
    }
  }
}

std::unique_ptr<Layer> make_layer(const nlohmann::json& spec) {
  const std::string kind = spec.at("kind").get<std::string>();
  if (kind == "dense")
    return std::make_unique<Dense>(spec.at("in").get<std::size_t>(),
                                   spec.at("out").get<std::size_t>(), spec.at("bias").get<bool>());
  if (kind == "conv2d")
    return std::make_unique<Conv2d>(spec.at("in_c").get<std::size_t>(),
                                    spec.at("out_c").get<std::size_t>(),
                                    spec.at("k").get<std::size_t>());
  if (kind == "batchnorm")
    return std::make_unique<BatchNorm>(spec.at("features").get<std::size_t>(),
                                       spec.at("momentum").get<double>(),
                                       spec.at("eps").get<double>());
  if (kind == "relu") return std::make_unique<ReLU>();
  if (kind == "softmax") return std::make_unique<Softmax>();
  if (kind == "dropout") return std::make_unique<Dropout>(spec.at("rate").get<double>());
  if (kind == "global_avg_pool") return std::make_unique<GlobalAvgPool>();
  if (kind == "flatten") return std::make_unique<Flatten>();
  throw std::invalid_argument("unknown layer kind: " + kind);
}

Model clone_model(Model& model) {
  Model out;
  for (auto& layer : model.layers) out.layers.push_back(make_layer(layer->spec()));
  for (std::size_t i = 0; i < model.layers.size(); ++i) {
    auto src_p = model.layers[i]->params();
    auto dst_p = out.layers[i]->params();
    for (std::size_t k = 0; k < src_p.size(); ++k) *dst_p[k] = *src_p[k];
    auto src_s = model.layers[i]->state();
    auto dst_s = out.layers[i]->state();
    for (std::size_t k = 0; k < src_s.size(); ++k) *dst_s[k] = *src_s[k];
  }
  return out;
}

}  // namespace amc::nn
