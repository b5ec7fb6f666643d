#include "amc/channel_est.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "amc/nn/adadelta.hpp"

namespace amc {

CeModel build_ce(std::uint64_t init_seed) {
  CeModel m;
  m.net.layers.push_back(std::make_unique<nn::Dense>(2, 8, /*bias=*/true));
  m.net.layers.push_back(std::make_unique<nn::ReLU>());
  m.net.layers.push_back(std::make_unique<nn::Dense>(8, 2, /*bias=*/true));
  nn::init_params(m.net, init_seed);
  // Zero output layer: a fresh estimator starts as the identity compensation.
  static_cast<nn::Dense*>(m.net.layers.back().get())->w.fill(0.0);
  return m;
}

std::pair<double, double> extract_features(const ComplexFrame& frame) {
  if (frame.samples.empty()) throw std::invalid_argument("extract_features: empty frame");
  double mean = 0.0;
  for (const cplx& s : frame.samples) mean += std::abs(s);
  mean /= static_cast<double>(frame.samples.size());
  double var = 0.0;
  for (const cplx& s : frame.samples) {
    double d = std::abs(s) - mean;
    var += d * d;
  }
  var /= static_cast<double>(frame.samples.size());
  return {mean, std::sqrt(var)};
}

namespace {

Compensation head(const double* raw) { return {1.0 + raw[0], raw[1]}; }

nn::Tensor features_tensor(const std::vector<const ComplexFrame*>& frames) {
  nn::Tensor x({frames.size(), 2});
  for (std::size_t i = 0; i < frames.size(); ++i) {
    auto [mean, sd] = extract_features(*frames[i]);
    x(i, 0) = mean;
    x(i, 1) = sd;
  }
  return x;
}

}  // namespace

Compensation estimate(CeModel& model, const ComplexFrame& frame) {
  nn::Tensor x = features_tensor({&frame});
  nn::Tensor raw = model.net.infer(x);
  return head(&raw.data[0]);
}

ComplexFrame compensate(const ComplexFrame& frame, const Compensation& comp) {
  ComplexFrame out = frame;
  const double c = std::cos(comp.delta_theta), s = std::sin(comp.delta_theta);
  for (auto& y : out.samples) {
    double i = y.real(), q = y.imag();
    y = cplx(comp.delta_r * (i * c + q * s), comp.delta_r * (-i * s + q * c));
  }
  return out;
}

std::pair<double, double> compensate_backward(const ComplexFrame& frame, const Compensation& comp,
                                              const std::vector<double>& dip,
                                              const std::vector<double>& dqp) {
  if (dip.size() != frame.samples.size() || dqp.size() != frame.samples.size())
    throw std::invalid_argument("compensate_backward: gradient length mismatch");
  const double c = std::cos(comp.delta_theta), s = std::sin(comp.delta_theta);
  double ddr = 0.0, ddt = 0.0;
  for (std::size_t n = 0; n < frame.samples.size(); ++n) {
    double i = frame.samples[n].real(), q = frame.samples[n].imag();
    ddr += dip[n] * (i * c + q * s) + dqp[n] * (-i * s + q * c);
    ddt += dip[n] * comp.delta_r * (-i * s + q * c) + dqp[n] * comp.delta_r * (-i * c - q * s);
  }
  return {ddr, ddt};
}

namespace {

// MAE loss + gradient of one CE batch through the compensation; the returned
// tensor is dL/draw for the network outputs.
struct CeBatchResult {
  double loss = 0.0;
  nn::Tensor draw;
};

CeBatchResult ce_batch_backward(const std::vector<const CePair*>& batch, const nn::Tensor& raw) {
  CeBatchResult res;
  res.draw = nn::Tensor({batch.size(), 2});
  for (std::size_t b = 0; b < batch.size(); ++b) {
    const ComplexFrame& rx = batch[b]->received;
    const ComplexFrame& gold = batch[b]->golden;
    if (rx.samples.size() != gold.samples.size())
      throw std::invalid_argument("ce training pair length mismatch");
    Compensation comp = head(&raw.data[b * 2]);
    ComplexFrame hat = compensate(rx, comp);
    const double inv_n = 1.0 / static_cast<double>(rx.samples.size());
    std::vector<double> dip(rx.samples.size(), 0.0), dqp(rx.samples.size(), 0.0);
    double frame_loss = 0.0;
    for (std::size_t n = 0; n < rx.samples.size(); ++n) {
      cplx e = hat.samples[n] - gold.samples[n];
      double mod = std::abs(e);
      frame_loss += mod;
      if (mod > 0.0) {
        dip[n] = e.real() / mod * inv_n;
        dqp[n] = e.imag() / mod * inv_n;
      }
    }
    res.loss += frame_loss * inv_n;
    auto [ddr, ddt] = compensate_backward(rx, comp, dip, dqp);
    res.draw(b, 0) = ddr;  // delta_r = 1 + raw[0]
    res.draw(b, 1) = ddt;
  }
  const double inv_b = 1.0 / static_cast<double>(batch.size());
  res.loss *= inv_b;
  for (auto& v : res.draw.data) v *= inv_b;
  return res;
}

double ce_validation_loss(CeModel& model, const std::vector<const CePair*>& pairs) {
  if (pairs.empty()) return 0.0;
  double total = 0.0;
  for (const CePair* p : pairs) {
    Compensation comp = estimate(model, p->received);
    ComplexFrame hat = compensate(p->received, comp);
    double frame_loss = 0.0;
    for (std::size_t n = 0; n < hat.samples.size(); ++n)
      frame_loss += std::abs(hat.samples[n] - p->golden.samples[n]);
    total += frame_loss / static_cast<double>(hat.samples.size());
  }
  return total / static_cast<double>(pairs.size());
}

nn::TrainHistory train_ce(CeModel& model, const std::vector<CePair>& pairs,
                          const nn::TrainConfig& cfg) {
  if (pairs.empty()) throw std::invalid_argument("ce training: empty pair list");
  std::mt19937_64 rng(cfg.rng_seed);
  std::vector<std::size_t> order(pairs.size());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);

  std::size_t n_val =
      static_cast<std::size_t>(cfg.validation_ratio * static_cast<double>(pairs.size()));
  if (n_val >= pairs.size()) n_val = pairs.size() - 1;
  std::vector<std::size_t> train_idx(order.begin(), order.end() - n_val);
  std::vector<const CePair*> val;
  for (auto it = order.end() - n_val; it != order.end(); ++it) val.push_back(&pairs[*it]);

  nn::Adadelta opt(cfg.adadelta_rho, cfg.adadelta_eps);
  nn::EarlyStopper stopper(cfg.patience);
  nn::TrainHistory history;

  for (std::size_t epoch = 0; epoch < cfg.max_epochs; ++epoch) {
    std::shuffle(train_idx.begin(), train_idx.end(), rng);
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < train_idx.size(); start += cfg.batch_size) {
      std::vector<const CePair*> batch;
      for (std::size_t i = start; i < std::min(start + cfg.batch_size, train_idx.size()); ++i)
        batch.push_back(&pairs[train_idx[i]]);
      std::vector<const ComplexFrame*> frames;
      for (const CePair* p : batch) frames.push_back(&p->received);
      nn::Tensor x = features_tensor(frames);
      nn::Tensor raw = model.net.forward(x, nn::Mode::Train, rng);
      CeBatchResult res = ce_batch_backward(batch, raw);
      epoch_loss += res.loss * static_cast<double>(batch.size());
      model.net.zero_grads();
      model.net.backward(res.draw);
      opt.step(model.net.params(), model.net.grads());
    }
    nn::EpochStats stats;
    stats.train_loss = epoch_loss / static_cast<double>(train_idx.size());
    stats.val_loss = val.empty() ? stats.train_loss : ce_validation_loss(model, val);
    history.epochs.push_back(stats);
    if (stopper.observe(stats.val_loss, model.net, epoch)) break;
  }
  stopper.restore_best(model.net);
  history.best_epoch = stopper.best_epoch();
  return history;
}

}  // namespace

nn::TrainHistory train_ce_offline(CeModel& model, const std::vector<CePair>& pairs,
                                  const nn::TrainConfig& cfg) {
  return train_ce(model, pairs, cfg);
}

nn::TrainHistory retrain_ce_golden(CeModel& model, const std::vector<CePair>& pairs,
                                   const nn::TrainConfig& cfg) {
  return train_ce(model, pairs, cfg);
}

nn::TrainHistory retrain_cnn_no_ce(nn::Model& cnn, const std::vector<ComplexFrame>& frames,
                                   const std::vector<Modulation>& pool, FeatureKind feature,
                                   const GridConfig& grid, const nn::TrainConfig& cfg) {
  if (frames.empty()) return {};
  nn::Dataset ds;
  ds.inputs = nn::Tensor({frames.size(), 1, grid.p_r, grid.p_theta});
  ds.targets = nn::Tensor({frames.size(), pool.size()});
  const std::size_t pix = grid.p_r * grid.p_theta;
  for (std::size_t i = 0; i < frames.size(); ++i) {
    if (!frames[i].label) throw std::invalid_argument("retrain_cnn_no_ce: unlabeled frame");
    GridImage img = frame_to_image(frames[i], feature, grid);
    std::copy(img.pixels.begin(), img.pixels.end(), ds.inputs.data.begin() + i * pix);
    auto cls = std::find(pool.begin(), pool.end(), *frames[i].label);
    if (cls == pool.end()) throw std::invalid_argument("retrain_cnn_no_ce: label not in pool");
    ds.targets(i, static_cast<std::size_t>(cls - pool.begin())) = 1.0;
  }
  return nn::train(cnn, ds, cfg, nn::LossKind::CrossEntropy);
}

namespace {

struct EndToEndGrad {
  double loss = 0.0;
  nn::Tensor draw;  // dL/draw at the CE outputs
};

// Forward + backward of the full chain for one batch of frames. The CNN runs
// in FrozenGrad mode; its parameter gradients are computed but discarded.
EndToEndGrad end_to_end_batch(CeModel& model, nn::Model& cnn,
                              const std::vector<const ComplexFrame*>& batch,
                              const std::vector<Modulation>& pool, const GridConfig& grid,
                              std::mt19937_64& rng, nn::Mode ce_mode) {
  const std::size_t pix = grid.p_r * grid.p_theta;
  nn::Tensor x = features_tensor(batch);
  nn::Tensor raw = model.net.forward(x, ce_mode, rng);

  std::vector<Compensation> comps(batch.size());
  std::vector<ComplexFrame> compensated(batch.size());
  std::vector<PolarSamples> polars(batch.size());
  std::vector<GridImage> raw_images(batch.size());
  nn::Tensor images({batch.size(), 1, grid.p_r, grid.p_theta});
  nn::Tensor targets({batch.size(), pool.size()});
  for (std::size_t b = 0; b < batch.size(); ++b) {
    comps[b] = head(&raw.data[b * 2]);
    compensated[b] = compensate(*batch[b], comps[b]);
    polars[b] = to_polar(compensated[b]);
    raw_images[b] = project_soft(polars[b], grid);
    GridImage norm = raw_images[b];
    normalize_image(norm);
    std::copy(norm.pixels.begin(), norm.pixels.end(), images.data.begin() + b * pix);
    if (!batch[b]->label) throw std::invalid_argument("end-to-end retraining: unlabeled frame");
    auto cls = std::find(pool.begin(), pool.end(), *batch[b]->label);
    if (cls == pool.end()) throw std::invalid_argument("end-to-end retraining: label not in pool");
    targets(b, static_cast<std::size_t>(cls - pool.begin())) = 1.0;
  }

  nn::Tensor probs = cnn.forward(images, nn::Mode::FrozenGrad, rng);
  EndToEndGrad out;
  out.loss = nn::cross_entropy(targets, probs);
  cnn.zero_grads();
  nn::Tensor dimages = cnn.backward(nn::cross_entropy_grad(targets, probs));
  cnn.zero_grads();  // frozen; drop whatever backward accumulated

  out.draw = nn::Tensor({batch.size(), 2});
  for (std::size_t b = 0; b < batch.size(); ++b) {
    std::vector<double> dnorm(dimages.data.begin() + b * pix, dimages.data.begin() + (b + 1) * pix);
    std::vector<double> dpix;
    normalize_image_backward(raw_images[b], dnorm, dpix);
    std::vector<double> dr, dtheta;
    project_soft_backward(polars[b], grid, dpix, dr, dtheta);
    std::vector<double> di, dq;
    to_polar_backward(compensated[b], dr, dtheta, di, dq);
    auto [ddr, ddt] = compensate_backward(*batch[b], comps[b], di, dq);
    out.draw(b, 0) = ddr;
    out.draw(b, 1) = ddt;
  }
  return out;
}

}  // namespace

nn::TrainHistory retrain_ce_end_to_end(CeModel& model, nn::Model& frozen_cnn,
                                       const std::vector<ComplexFrame>& frames,
                                       const std::vector<Modulation>& pool, FeatureKind feature,
                                       const GridConfig& grid, const nn::TrainConfig& cfg) {
  if (feature != FeatureKind::SoftPolar)
    throw std::invalid_argument(
        "end-to-end retraining needs the differentiable (soft) projection");
  if (frames.empty()) return {};
  std::mt19937_64 rng(cfg.rng_seed);
  std::vector<std::size_t> order(frames.size());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);

  nn::Adadelta opt(cfg.adadelta_rho, cfg.adadelta_eps);
  nn::EarlyStopper stopper(cfg.patience);
  nn::TrainHistory history;
  for (std::size_t epoch = 0; epoch < cfg.max_epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      std::vector<const ComplexFrame*> batch;
      for (std::size_t i = start; i < std::min(start + cfg.batch_size, order.size()); ++i)
        batch.push_back(&frames[order[i]]);
      EndToEndGrad g = end_to_end_batch(model, frozen_cnn, batch, pool, grid, rng, nn::Mode::Train);
      epoch_loss += g.loss * static_cast<double>(batch.size());
      model.net.zero_grads();
      model.net.backward(g.draw);
      opt.step(model.net.params(), model.net.grads());
    }
    nn::EpochStats stats;
    stats.train_loss = epoch_loss / static_cast<double>(order.size());
    stats.val_loss = stats.train_loss;  // all labeled frames train; loss drives the stopper
    history.epochs.push_back(stats);
    if (stopper.observe(stats.val_loss, model.net, epoch)) break;
  }
  stopper.restore_best(model.net);
  history.best_epoch = stopper.best_epoch();
  return history;
}

std::pair<double, std::vector<double>> ce_end_to_end_loss_and_grad(
    CeModel& model, nn::Model& frozen_cnn, const std::vector<ComplexFrame>& frames,
    const std::vector<Modulation>& pool, const GridConfig& grid) {
  std::vector<const ComplexFrame*> batch;
  for (const auto& f : frames) batch.push_back(&f);
  std::mt19937_64 rng(0);
  model.net.zero_grads();
  EndToEndGrad g =
      end_to_end_batch(model, frozen_cnn, batch, pool, grid, rng, nn::Mode::FrozenGrad);
  model.net.backward(g.draw);
  std::vector<double> flat;
  for (nn::Tensor* t : model.net.grads())
    flat.insert(flat.end(), t->data.begin(), t->data.end());
  return {g.loss, flat};
}

std::string mechanism_name(RetrainMechanism m) {
  switch (m) {
    case RetrainMechanism::CnnNoCe: return "cnn_no_ce";
    case RetrainMechanism::CeGolden: return "ce_golden";
    case RetrainMechanism::CeEndToEnd: return "ce_end_to_end";
  }
  throw std::logic_error("bad mechanism enum");
}

RetrainMechanism mechanism_from_name(const std::string& name) {
  if (name == "cnn_no_ce") return RetrainMechanism::CnnNoCe;
  if (name == "ce_golden") return RetrainMechanism::CeGolden;
  if (name == "ce_end_to_end") return RetrainMechanism::CeEndToEnd;
  throw std::invalid_argument("unknown retraining mechanism: " + name);
}

RetrainBudget overhead_report(RetrainMechanism mechanism, std::size_t frames, std::size_t n,
                              std::size_t pool_size, double retraining_seconds) {
  if (pool_size < 2) throw std::invalid_argument("overhead_report: pool too small");
  RetrainBudget b;
  b.mechanism = mechanism;
  b.frames = frames;
  if (mechanism == RetrainMechanism::CeGolden) {
    b.bits_per_label = 2 * n;
  } else {
    std::size_t bits = 0;
    while ((1ULL << bits) < pool_size) ++bits;  // ceil(log2(M))
    b.bits_per_label = bits;
  }
  b.transmission_overhead_bits = frames * b.bits_per_label;
  b.retraining_seconds = retraining_seconds;
  return b;
}

nn::TrainConfig default_pilot_fit_config() {
  nn::TrainConfig cfg;
  cfg.batch_size = 10;
  cfg.max_epochs = 150;
  cfg.patience = 20;
  cfg.validation_ratio = 0.0;
  return cfg;
}

ComplexFrame compensate_via_pilot_fit(CeModel& base, const ComplexFrame& frame,
                                      const std::vector<Modulation>& pool,
                                      std::size_t pilot_pairs, const nn::TrainConfig& fit_cfg,
                                      std::uint64_t seed) {
  if (!frame.channel)
    throw std::invalid_argument("pilot calibration needs the frame's channel parameters");
  if (pool.empty() || pilot_pairs == 0)
    throw std::invalid_argument("pilot calibration needs a pool and at least one pilot pair");
  std::vector<CePair> pilots(pilot_pairs);
  for (std::size_t i = 0; i < pilot_pairs; ++i) {
    std::uint64_t s = derive_seed(seed, i);
    ComplexFrame tx = generate_frame(pool[i % pool.size()], frame.samples.size(), s);
    pilots[i].golden = tx;
    pilots[i].received = apply_channel(tx, *frame.channel, derive_seed(s, 1));
  }
  CeModel fitted;
  fitted.net = nn::clone_model(base.net);
  nn::TrainConfig cfg = fit_cfg;
  cfg.rng_seed = derive_seed(seed, 0xF17ULL);
  train_ce(fitted, pilots, cfg);
  return compensate(frame, estimate(fitted, frame));
}

Modulation classify_cnn(nn::Model& cnn, const ComplexFrame& frame,
                        const std::vector<Modulation>& pool, FeatureKind feature,
                        const GridConfig& grid) {
  GridImage img = frame_to_image(frame, feature, grid);
  nn::Tensor x({1, 1, grid.p_r, grid.p_theta});
  x.data = img.pixels;
  nn::Tensor probs = cnn.infer(x);
  std::size_t best = 0;
  for (std::size_t j = 1; j < pool.size(); ++j)
    if (probs.data[j] > probs.data[best]) best = j;
  return pool[best];
}

Modulation classify_cnn_ce(CeModel& ce, nn::Model& cnn, const ComplexFrame& frame,
                           const std::vector<Modulation>& pool, FeatureKind feature,
                           const GridConfig& grid) {
  return classify_cnn(cnn, compensate(frame, estimate(ce, frame)), pool, feature, grid);
}

}  // namespace amc
