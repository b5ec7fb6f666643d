#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

#include "amc/nn/adadelta.hpp"
#include "amc/nn/checkpoint.hpp"
#include "amc/nn/layers.hpp"
#include "amc/nn/losses.hpp"
#include "amc/nn/train.hpp"

using namespace amc::nn;

namespace {

void randomize(Tensor& t, std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  for (auto& v : t.data) v = u(rng);
}

// Scalar objective sum(weights .* forward(x)) for gradient checking; the rng
// is re-seeded per call so stochastic layers replay the same draw.
double layer_objective(Layer& layer, const Tensor& x, const Tensor& weights,
                       std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Tensor y = layer.forward(x, Mode::Train, rng);
  double L = 0.0;
  for (std::size_t i = 0; i < y.numel(); ++i) L += weights.data[i] * y.data[i];
  return L;
}

// Checks dL/dx and dL/dparam against central differences at step 1e-5.
void check_layer_gradients(Layer& layer, Tensor x, std::uint64_t seed = 99,
                           double tol = 1e-4) {
  std::mt19937_64 rng(seed);
  Tensor probe = layer.forward(x, Mode::Train, rng);
  Tensor weights(probe.shape);
  std::mt19937_64 wrng(seed + 1);
  randomize(weights, wrng);

  for (Tensor* g : layer.grads()) g->fill(0.0);
  layer_objective(layer, x, weights, seed);
  Tensor dx = layer.backward(weights);

  const double h = 1e-5;
  for (std::size_t i = 0; i < x.numel(); ++i) {
    Tensor xp = x, xm = x;
    xp.data[i] += h;
    xm.data[i] -= h;
    double fd = (layer_objective(layer, xp, weights, seed) -
                 layer_objective(layer, xm, weights, seed)) /
                (2 * h);
    CHECK(std::abs(dx.data[i] - fd) <= tol * std::max(1.0, std::abs(fd)));
  }
  auto params = layer.params();
  auto grads = layer.grads();
  for (std::size_t p = 0; p < params.size(); ++p)
    for (std::size_t i = 0; i < params[p]->numel(); ++i) {
      double keep = params[p]->data[i];
      params[p]->data[i] = keep + h;
      double up = layer_objective(layer, x, weights, seed);
      params[p]->data[i] = keep - h;
      double down = layer_objective(layer, x, weights, seed);
      params[p]->data[i] = keep;
      double fd = (up - down) / (2 * h);
      CHECK(std::abs(grads[p]->data[i] - fd) <= tol * std::max(1.0, std::abs(fd)));
    }
}

}  // namespace

TEST_CASE("relu semantics") {
  ReLU relu;
  Tensor x({1, 3});
  x.data = {-1.0, 0.0, 2.0};
  std::mt19937_64 rng(0);
  Tensor y = relu.forward(x, Mode::Infer, rng);
  CHECK(y.data[0] == 0.0);
  CHECK(y.data[1] == 0.0);
  CHECK(y.data[2] == 2.0);
}

TEST_CASE("softmax normalizes and is symmetric on constants") {
  Softmax sm;
  Tensor x({2, 4});
  x.data = {3.0, 3.0, 3.0, 3.0, 0.1, -2.0, 5.0, 1.0};
  std::mt19937_64 rng(0);
  Tensor y = sm.forward(x, Mode::Infer, rng);
  for (std::size_t j = 0; j < 4; ++j) CHECK(y(0, j) == doctest::Approx(0.25).epsilon(1e-12));
  double sum = 0.0;
  for (std::size_t j = 0; j < 4; ++j) {
    CHECK(y(1, j) > 0.0);
    sum += y(1, j);
  }
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("dropout rate zero is the identity in both modes") {
  Dropout d(0.0);
  Tensor x({2, 5});
  std::mt19937_64 rng(1);
  randomize(x, rng);
  for (Mode mode : {Mode::Train, Mode::Infer}) {
    std::mt19937_64 r2(2);
    Tensor y = d.forward(x, mode, r2);
    for (std::size_t i = 0; i < x.numel(); ++i) CHECK(y.data[i] == x.data[i]);
  }
}

TEST_CASE("dropout keeps expectation via inverted scaling") {
  Dropout d(0.5);
  Tensor x({1, 10000});
  x.fill(1.0);
  std::mt19937_64 rng(7);
  Tensor y = d.forward(x, Mode::Train, rng);
  double mean = 0.0;
  for (double v : y.data) {
    CHECK((v == 0.0 || v == doctest::Approx(2.0)));
    mean += v;
  }
  mean /= static_cast<double>(y.numel());
  CHECK(std::abs(mean - 1.0) < 0.05);
}

TEST_CASE("dense layer gradients") {
  std::mt19937_64 rng(10);
  Dense d(4, 3, true);
  randomize(d.w, rng);
  randomize(d.b, rng);
  Tensor x({5, 4});
  randomize(x, rng);
  check_layer_gradients(d, x);

  Dense nb(3, 2, false);
  randomize(nb.w, rng);
  Tensor x2({2, 3});
  randomize(x2, rng);
  check_layer_gradients(nb, x2);
}

TEST_CASE("dense wx scalar case: dL/dw = x") {
  Dense d(1, 1, false);
  d.w(0, 0) = 0.7;
  Tensor x({1, 1});
  x.data = {1.9};
  std::mt19937_64 rng(0);
  d.forward(x, Mode::Train, rng);
  Tensor dy({1, 1});
  dy.data = {1.0};
  d.dw.fill(0.0);
  d.backward(dy);
  CHECK(d.dw(0, 0) == doctest::Approx(1.9));
}

TEST_CASE("conv2d gradients") {
  std::mt19937_64 rng(11);
  Conv2d c(2, 3, 3);
  randomize(c.w, rng);
  Tensor x({2, 2, 6, 5});
  randomize(x, rng);
  check_layer_gradients(c, x);
}

TEST_CASE("batchnorm gradients (2d and 4d)") {
  std::mt19937_64 rng(12);
  BatchNorm bn2(3);
  randomize(bn2.gamma, rng);
  randomize(bn2.beta, rng);
  Tensor x2({6, 3});
  randomize(x2, rng);
  check_layer_gradients(bn2, x2, 99, 2e-4);

  BatchNorm bn4(2);
  randomize(bn4.gamma, rng);
  randomize(bn4.beta, rng);
  Tensor x4({3, 2, 4, 4});
  randomize(x4, rng);
  check_layer_gradients(bn4, x4, 99, 2e-4);
}

TEST_CASE("softmax, pooling, relu, dropout gradients") {
  std::mt19937_64 rng(13);
  Softmax sm;
  Tensor x({4, 5});
  randomize(x, rng);
  check_layer_gradients(sm, x);

  GlobalAvgPool gap;
  Tensor x4({2, 3, 4, 4});
  randomize(x4, rng);
  check_layer_gradients(gap, x4);

  Flatten fl;
  check_layer_gradients(fl, x4);

  ReLU relu;
  Tensor xr({3, 7});
  randomize(xr, rng);
  for (auto& v : xr.data)
    if (std::abs(v) < 1e-3) v += 0.01;  // keep clear of the kink
  check_layer_gradients(relu, xr);

  Dropout dr(0.4);
  Tensor xd({3, 6});
  randomize(xd, rng);
  check_layer_gradients(dr, xd);
}

TEST_CASE("batchnorm infer mode is affine in its input") {
  BatchNorm bn(2);
  std::mt19937_64 rng(14);
  for (int k = 0; k < 3; ++k) {
    Tensor warm({8, 2});
    randomize(warm, rng, 2.0);
    bn.forward(warm, Mode::Train, rng);
  }
  Tensor a({1, 2}), b({1, 2});
  a.data = {0.3, -1.2};
  b.data = {-0.7, 0.9};
  auto f = [&](const Tensor& t) { return bn.forward(t, Mode::Infer, rng); };
  Tensor fa = f(a), fb = f(b);
  Tensor mix({1, 2});
  const double lam = 0.37;
  for (int i = 0; i < 2; ++i) mix.data[i] = lam * a.data[i] + (1 - lam) * b.data[i];
  Tensor fmix = f(mix);
  for (int i = 0; i < 2; ++i)
    CHECK(fmix.data[i] ==
          doctest::Approx(lam * fa.data[i] + (1 - lam) * fb.data[i]).epsilon(1e-12));
}

TEST_CASE("frozen-grad forward matches inference exactly") {
  Model m;
  m.layers.push_back(std::make_unique<Conv2d>(1, 2, 3));
  m.layers.push_back(std::make_unique<BatchNorm>(2));
  m.layers.push_back(std::make_unique<ReLU>());
  m.layers.push_back(std::make_unique<GlobalAvgPool>());
  m.layers.push_back(std::make_unique<Dense>(2, 3, true));
  m.layers.push_back(std::make_unique<Dropout>(0.5));
  m.layers.push_back(std::make_unique<Softmax>());
  init_params(m, 20);
  std::mt19937_64 rng(21);
  Tensor warm({5, 1, 6, 6});
  randomize(warm, rng);
  m.forward(warm, Mode::Train, rng);

  Tensor x({2, 1, 6, 6});
  randomize(x, rng);
  Tensor yi = m.infer(x);
  std::vector<Tensor> state_before;
  for (Tensor* t : m.state()) state_before.push_back(*t);
  std::mt19937_64 r2(3);
  Tensor yf = m.forward(x, Mode::FrozenGrad, r2);
  for (std::size_t i = 0; i < yi.numel(); ++i) CHECK(yi.data[i] == yf.data[i]);
  // FrozenGrad must not touch running statistics
  auto state_after = m.state();
  for (std::size_t k = 0; k < state_after.size(); ++k)
    for (std::size_t i = 0; i < state_after[k]->numel(); ++i)
      CHECK(state_after[k]->data[i] == state_before[k].data[i]);
}

TEST_CASE("frozen-grad input gradient matches finite differences") {
  Model m;
  m.layers.push_back(std::make_unique<Conv2d>(1, 2, 3));
  m.layers.push_back(std::make_unique<BatchNorm>(2));
  m.layers.push_back(std::make_unique<ReLU>());
  m.layers.push_back(std::make_unique<GlobalAvgPool>());
  m.layers.push_back(std::make_unique<Dense>(2, 3, true));
  m.layers.push_back(std::make_unique<Softmax>());
  init_params(m, 22);
  std::mt19937_64 rng(23);
  Tensor warm({5, 1, 5, 5});
  randomize(warm, rng);
  m.forward(warm, Mode::Train, rng);

  Tensor x({2, 1, 5, 5});
  randomize(x, rng);
  Tensor w({2, 3});
  randomize(w, rng);
  auto objective = [&](const Tensor& t) {
    Tensor y = m.infer(t);
    double L = 0.0;
    for (std::size_t i = 0; i < y.numel(); ++i) L += w.data[i] * y.data[i];
    return L;
  };
  std::mt19937_64 r2(0);
  m.zero_grads();
  m.forward(x, Mode::FrozenGrad, r2);
  Tensor dx = m.backward(w);
  const double h = 1e-5;
  for (std::size_t i = 0; i < x.numel(); ++i) {
    Tensor xp = x, xm = x;
    xp.data[i] += h;
    xm.data[i] -= h;
    double fd = (objective(xp) - objective(xm)) / (2 * h);
    CHECK(std::abs(dx.data[i] - fd) <= 1e-4 * std::max(1.0, std::abs(fd)));
  }
}

TEST_CASE("cross entropy hand values") {
  Tensor y({1, 4}), p({1, 4});
  y.data = {1, 0, 0, 0};
  CHECK(cross_entropy(y, y) <= 1e-10);

  p.data = {0.25, 0.25, 0.25, 0.25};
  double expected = -(std::log(0.25) + 3.0 * std::log(0.75)) / 4.0;
  CHECK(expected == doctest::Approx(0.5623).epsilon(1e-3));
  CHECK(cross_entropy(y, p) == doctest::Approx(expected).epsilon(1e-12));

  Tensor y2({1, 4}), p2({1, 4});
  y2.data = {0, 0, 1, 0};
  p2.data = {0.25, 0.25, 0.25, 0.25};
  CHECK(cross_entropy(y2, p2) == doctest::Approx(cross_entropy(y, p)).epsilon(1e-12));
}

TEST_CASE("mae hand values and triangle inequality") {
  Tensor t({1, 20}), p({1, 20});
  t.fill(0.0);
  for (std::size_t k = 0; k < 10; ++k) {
    p.data[2 * k] = 3.0;
    p.data[2 * k + 1] = 4.0;
  }
  CHECK(mae(t, p) == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(mae(t, t) == 0.0);

  std::mt19937_64 rng(15);
  for (int rep = 0; rep < 20; ++rep) {
    Tensor a({1, 8}), b({1, 8}), c({1, 8});
    randomize(a, rng);
    randomize(b, rng);
    randomize(c, rng);
    CHECK(mae(a, c) <= mae(a, b) + mae(b, c) + 1e-12);
  }
}

TEST_CASE("loss gradients match finite differences") {
  std::mt19937_64 rng(16);
  Tensor y({3, 4});
  for (std::size_t i = 0; i < 3; ++i) y(i, i % 4) = 1.0;
  Tensor logits({3, 4});
  randomize(logits, rng);
  Softmax sm;
  Tensor p = sm.forward(logits, Mode::Infer, rng);

  Tensor g = cross_entropy_grad(y, p);
  const double h = 1e-7;
  for (std::size_t i = 0; i < p.numel(); ++i) {
    Tensor pp = p, pm = p;
    pp.data[i] += h;
    pm.data[i] -= h;
    double fd = (cross_entropy(y, pp) - cross_entropy(y, pm)) / (2 * h);
    CHECK(std::abs(g.data[i] - fd) <= 1e-4 * std::max(1.0, std::abs(fd)));
  }

  Tensor target({2, 6}), pred({2, 6});
  randomize(target, rng);
  randomize(pred, rng);
  Tensor mg = mae_grad(target, pred);
  for (std::size_t i = 0; i < pred.numel(); ++i) {
    Tensor pp = pred, pm = pred;
    pp.data[i] += h;
    pm.data[i] -= h;
    double fd = (mae(target, pp) - mae(target, pm)) / (2 * h);
    CHECK(std::abs(mg.data[i] - fd) <= 1e-4 * std::max(1.0, std::abs(fd)));
  }
}

TEST_CASE("full tiny model gradient check") {
  // 2 conv + 1 dense on an 8x8 input
  Model m;
  m.layers.push_back(std::make_unique<Conv2d>(1, 2, 3));
  m.layers.push_back(std::make_unique<BatchNorm>(2));
  m.layers.push_back(std::make_unique<ReLU>());
  m.layers.push_back(std::make_unique<Conv2d>(2, 2, 3));
  m.layers.push_back(std::make_unique<BatchNorm>(2));
  m.layers.push_back(std::make_unique<ReLU>());
  m.layers.push_back(std::make_unique<GlobalAvgPool>());
  m.layers.push_back(std::make_unique<Dense>(2, 4, true));
  m.layers.push_back(std::make_unique<Softmax>());
  init_params(m, 2025);

  Tensor x({3, 1, 8, 8});
  std::mt19937_64 rng(17);
  randomize(x, rng);
  Tensor y({3, 4});
  y(0, 1) = 1.0;
  y(1, 3) = 1.0;
  y(2, 0) = 1.0;

  auto loss_at = [&]() {
    std::mt19937_64 r(42);
    Tensor p = m.forward(x, Mode::Train, r);
    return cross_entropy(y, p);
  };

  m.zero_grads();
  std::mt19937_64 r(42);
  Tensor p = m.forward(x, Mode::Train, r);
  m.backward(cross_entropy_grad(y, p));

  auto params = m.params();
  auto grads = m.grads();
  const double h = 1e-5;
  for (std::size_t pi = 0; pi < params.size(); ++pi)
    for (std::size_t i = 0; i < params[pi]->numel(); ++i) {
      double keep = params[pi]->data[i];
      params[pi]->data[i] = keep + h;
      double up = loss_at();
      params[pi]->data[i] = keep - h;
      double down = loss_at();
      params[pi]->data[i] = keep;
      double fd = (up - down) / (2 * h);
      CHECK(std::abs(grads[pi]->data[i] - fd) <= 1e-4 * std::max(1.0, std::abs(fd)));
    }

  // zero upstream gradient produces zero parameter gradients
  m.zero_grads();
  std::mt19937_64 r2(42);
  m.forward(x, Mode::Train, r2);
  Tensor zero_dy({3, 4});
  m.backward(zero_dy);
  for (Tensor* g : m.grads())
    for (double v : g->data) CHECK(v == 0.0);
}

TEST_CASE("adadelta first step matches the hand-evaluated update") {
  // E[g^2] = 0.05; dx = -sqrt(1e-6) / sqrt(0.05 + 1e-6) = -4.472117e-3
  Tensor p({1});
  p.data = {1.0};
  Tensor g({1});
  g.data = {1.0};
  Adadelta opt(0.95, 1e-6);
  opt.step({&p}, {&g});
  const double expected = -std::sqrt(1e-6) / std::sqrt(0.05 + 1e-6);
  CHECK(p.data[0] - 1.0 == doctest::Approx(expected).epsilon(1e-12));
  CHECK(expected == doctest::Approx(-4.472117e-3).epsilon(1e-6));
}

TEST_CASE("adadelta zero gradient leaves parameters and fresh state unchanged") {
  Tensor p({3});
  p.data = {1.0, -2.0, 0.5};
  Tensor g({3});
  Adadelta opt;
  opt.step({&p}, {&g});
  CHECK(p.data[0] == 1.0);
  CHECK(p.data[1] == -2.0);
  CHECK(p.data[2] == 0.5);
}

TEST_CASE("adadelta steps oppose the gradient sign") {
  std::mt19937_64 rng(18);
  Tensor p({20});
  randomize(p, rng);
  Adadelta opt;
  for (int it = 0; it < 5; ++it) {
    Tensor g({20});
    randomize(g, rng);
    Tensor before = p;
    opt.step({&p}, {&g});
    for (std::size_t i = 0; i < p.numel(); ++i) {
      double dx = p.data[i] - before.data[i];
      if (g.data[i] != 0.0) CHECK(dx * g.data[i] <= 0.0);
    }
  }
}

namespace {

Dataset separable_toy(std::size_t per_class, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Dataset ds;
  ds.inputs = Tensor({2 * per_class, 2});
  ds.targets = Tensor({2 * per_class, 2});
  for (std::size_t i = 0; i < 2 * per_class; ++i) {
    bool cls = i % 2 == 1;
    ds.inputs(i, 0) = u(rng) + (cls ? 2.0 : -3.0);
    ds.inputs(i, 1) = u(rng);
    ds.targets(i, cls ? 1 : 0) = 1.0;
  }
  return ds;
}

Model toy_model(std::uint64_t seed) {
  Model m;
  m.layers.push_back(std::make_unique<Dense>(2, 2, true));
  m.layers.push_back(std::make_unique<Softmax>());
  init_params(m, seed);
  return m;
}

}  // namespace

TEST_CASE("training a linear model separates a separable set") {
  Dataset ds = separable_toy(50, 3);
  Model m = toy_model(4);
  TrainConfig cfg;
  cfg.batch_size = 10;
  cfg.max_epochs = 200;
  cfg.patience = 200;
  cfg.validation_ratio = 0.2;
  cfg.rng_seed = 5;
  train(m, ds, cfg, LossKind::CrossEntropy);
  EpochStats final = evaluate_model(m, ds, LossKind::CrossEntropy);
  CHECK(final.val_acc == 1.0);
}

TEST_CASE("patience zero with one epoch runs exactly one epoch") {
  Dataset ds = separable_toy(20, 6);
  Model m = toy_model(7);
  TrainConfig cfg;
  cfg.batch_size = 8;
  cfg.max_epochs = 1;
  cfg.patience = 0;
  cfg.rng_seed = 8;
  TrainHistory h = train(m, ds, cfg, LossKind::CrossEntropy);
  CHECK(h.epochs.size() == 1);
}

TEST_CASE("early stopping restores the best validation epoch") {
  Dataset ds = separable_toy(40, 9);
  Model m = toy_model(10);
  TrainConfig cfg;
  cfg.batch_size = 8;
  cfg.max_epochs = 60;
  cfg.patience = 3;
  cfg.validation_ratio = 0.25;
  cfg.rng_seed = 11;
  TrainHistory h = train(m, ds, cfg, LossKind::CrossEntropy);
  REQUIRE(!h.epochs.empty());
  double best = h.epochs[h.best_epoch].val_loss;
  for (const auto& e : h.epochs) CHECK(best <= e.val_loss + 1e-12);
}

TEST_CASE("training is deterministic per seed") {
  Dataset ds = separable_toy(30, 12);
  TrainConfig cfg;
  cfg.batch_size = 16;
  cfg.max_epochs = 10;
  cfg.patience = 10;
  cfg.rng_seed = 13;
  Model a = toy_model(14);
  Model b = toy_model(14);
  train(a, ds, cfg, LossKind::CrossEntropy);
  train(b, ds, cfg, LossKind::CrossEntropy);
  auto pa = a.params(), pb = b.params();
  REQUIRE(pa.size() == pb.size());
  for (std::size_t i = 0; i < pa.size(); ++i)
    for (std::size_t k = 0; k < pa[i]->numel(); ++k) CHECK(pa[i]->data[k] == pb[i]->data[k]);
}

TEST_CASE("empty dataset is rejected") {
  Dataset empty;
  Model m = toy_model(1);
  TrainConfig cfg;
  CHECK_THROWS(train(m, empty, cfg, LossKind::CrossEntropy));
}

TEST_CASE("shape mismatch errors name the layer") {
  Dense d(4, 2, true);
  Tensor bad({2, 3});
  std::mt19937_64 rng(0);
  CHECK_THROWS_WITH_AS(d.forward(bad, Mode::Infer, rng), "dense: input width mismatch",
                       std::invalid_argument);
  Conv2d c(2, 1, 3);
  Tensor bad4({1, 1, 8, 8});
  CHECK_THROWS_AS(c.forward(bad4, Mode::Infer, rng), std::invalid_argument);
}

TEST_CASE("checkpoint round-trips bit-exactly") {
  Model m;
  m.layers.push_back(std::make_unique<Conv2d>(1, 2, 3));
  m.layers.push_back(std::make_unique<BatchNorm>(2));
  m.layers.push_back(std::make_unique<ReLU>());
  m.layers.push_back(std::make_unique<GlobalAvgPool>());
  m.layers.push_back(std::make_unique<Dense>(2, 4, true));
  m.layers.push_back(std::make_unique<Dropout>(0.5));
  m.layers.push_back(std::make_unique<Softmax>());
  init_params(m, 77);
  std::mt19937_64 rng(78);
  Tensor warm({4, 1, 6, 6});
  randomize(warm, rng);
  m.forward(warm, Mode::Train, rng);  // move batchnorm state off the defaults

  nlohmann::json meta;
  meta["note"] = "round trip";
  save_model("tmp_model_a.ckpt", m, meta);
  LoadedModel loaded = load_model("tmp_model_a.ckpt");
  CHECK(loaded.meta.at("note") == "round trip");
  save_model("tmp_model_b.ckpt", loaded.model, loaded.meta);

  std::ifstream fa("tmp_model_a.ckpt", std::ios::binary), fb("tmp_model_b.ckpt", std::ios::binary);
  std::string sa((std::istreambuf_iterator<char>(fa)), std::istreambuf_iterator<char>());
  std::string sb((std::istreambuf_iterator<char>(fb)), std::istreambuf_iterator<char>());
  CHECK(sa == sb);
  CHECK(!sa.empty());

  Tensor x({2, 1, 6, 6});
  randomize(x, rng);
  Tensor y1 = m.infer(x);
  Tensor y2 = loaded.model.infer(x);
  for (std::size_t i = 0; i < y1.numel(); ++i) CHECK(y1.data[i] == y2.data[i]);
  std::remove("tmp_model_a.ckpt");
  std::remove("tmp_model_b.ckpt");
}

TEST_CASE("clone_model copies parameters and state") {
  Model m;
  m.layers.push_back(std::make_unique<Dense>(3, 2, true));
  m.layers.push_back(std::make_unique<BatchNorm>(2));
  init_params(m, 5);
  Model c = clone_model(m);
  auto pm = m.params(), pc = c.params();
  for (std::size_t i = 0; i < pm.size(); ++i)
    for (std::size_t k = 0; k < pm[i]->numel(); ++k) CHECK(pm[i]->data[k] == pc[i]->data[k]);
  pc[0]->data[0] += 1.0;
  CHECK(pm[0]->data[0] != pc[0]->data[0]);
}
