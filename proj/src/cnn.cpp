#include "amc/cnn.hpp"

#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "amc/detail/binio.hpp"

namespace amc {

std::string feature_name(FeatureKind k) {
  switch (k) {
    case FeatureKind::Iq: return "iq";
    case FeatureKind::PolarBinary: return "polar_binary";
    case FeatureKind::AccumulatedPolar: return "accumulated_polar";
    case FeatureKind::SoftPolar: return "soft_polar";
  }
  throw std::logic_error("bad feature enum");
}

FeatureKind feature_from_name(const std::string& name) {
  if (name == "iq") return FeatureKind::Iq;
  if (name == "polar_binary") return FeatureKind::PolarBinary;
  if (name == "accumulated_polar") return FeatureKind::AccumulatedPolar;
  if (name == "soft_polar") return FeatureKind::SoftPolar;
  throw std::invalid_argument("unknown feature kind: " + name);
}

ChannelMode channel_mode_from_name(const std::string& name) {
  if (name == "awgn") return ChannelMode::Awgn;
  if (name == "fading") return ChannelMode::Fading;
  if (name == "fixed") return ChannelMode::Fixed;
  throw std::invalid_argument("unknown channel mode: " + name);
}

std::string channel_mode_name(ChannelMode m) {
  switch (m) {
    case ChannelMode::Awgn: return "awgn";
    case ChannelMode::Fading: return "fading";
    case ChannelMode::Fixed: return "fixed";
  }
  throw std::logic_error("bad channel mode enum");
}

nn::Model build_cnn(const CnnConfig& cfg, std::uint64_t init_seed) {
  const std::size_t k = cfg.filter_size;
  if (cfg.p_r < 2 * (k - 1) + 1 || cfg.p_theta < 2 * (k - 1) + 1)
    throw std::invalid_argument("build_cnn: resolution too small for two valid convolutions");
  const std::size_t conv1 = 1ULL << (cfg.t + 1);
  const std::size_t conv2 = 1ULL << cfg.t;
  const std::size_t dense1 = conv1, dense2 = conv2, dense3 = 4;

  nn::Model m;
  m.layers.push_back(std::make_unique<nn::Conv2d>(1, conv1, k));
  m.layers.push_back(std::make_unique<nn::BatchNorm>(conv1));
  m.layers.push_back(std::make_unique<nn::ReLU>());
  m.layers.push_back(std::make_unique<nn::Conv2d>(conv1, conv2, k));
  m.layers.push_back(std::make_unique<nn::BatchNorm>(conv2));
  m.layers.push_back(std::make_unique<nn::ReLU>());
  m.layers.push_back(std::make_unique<nn::GlobalAvgPool>());
  m.layers.push_back(std::make_unique<nn::Dense>(conv2, dense1, /*bias=*/false));
  m.layers.push_back(std::make_unique<nn::BatchNorm>(dense1));
  m.layers.push_back(std::make_unique<nn::ReLU>());
  m.layers.push_back(std::make_unique<nn::Dropout>(cfg.dropout_rate));
  m.layers.push_back(std::make_unique<nn::Dense>(dense1, dense2, /*bias=*/false));
  m.layers.push_back(std::make_unique<nn::BatchNorm>(dense2));
  m.layers.push_back(std::make_unique<nn::ReLU>());
  m.layers.push_back(std::make_unique<nn::Dropout>(cfg.dropout_rate));
  m.layers.push_back(std::make_unique<nn::Dense>(dense2, dense3, /*bias=*/true));
  m.layers.push_back(std::make_unique<nn::Softmax>());
  nn::init_params(m, init_seed);
  return m;
}

GridImage frame_to_image(const ComplexFrame& frame, FeatureKind kind, const GridConfig& grid) {
  GridImage img;
  switch (kind) {
    case FeatureKind::Iq: {
      GridConfig iq_cfg = grid;
      iq_cfg.r0 = -3.0;
      iq_cfg.r1 = 3.0;
      iq_cfg.theta0 = -3.0;
      iq_cfg.theta1 = 3.0;
      std::vector<double> is(frame.samples.size()), qs(frame.samples.size());
      for (std::size_t n = 0; n < frame.samples.size(); ++n) {
        is[n] = frame.samples[n].real();
        qs[n] = frame.samples[n].imag();
      }
      img = project_points(is, qs, iq_cfg, /*accumulate=*/false);
      break;
    }
    case FeatureKind::PolarBinary:
      img = project_hard(to_polar(frame), grid, /*accumulate=*/false);
      break;
    case FeatureKind::AccumulatedPolar:
      img = project_hard(to_polar(frame), grid, /*accumulate=*/true);
      break;
    case FeatureKind::SoftPolar:
      img = project_soft(to_polar(frame), grid);
      break;
  }
  normalize_image(img);
  return img;
}

namespace {

ComplexFrame received_frame(const DatasetSpec& spec, std::size_t cls, std::size_t i) {
  const std::uint64_t frame_seed = derive_seed(spec.seed, cls * 1000003ULL + i * 2 + 0);
  const std::uint64_t noise_seed = derive_seed(spec.seed, cls * 1000003ULL + i * 2 + 1);
  ComplexFrame tx = generate_frame(spec.pool[cls], spec.n, frame_seed);
  ChannelParams ch;
  switch (spec.mode) {
    case ChannelMode::Awgn:
      ch.snr_db = spec.snr_db;
      break;
    case ChannelMode::Fading:
      ch = draw_fading_channel(spec.snr_db, derive_seed(noise_seed, 7));
      break;
    case ChannelMode::Fixed:
      ch = spec.fixed_channel;
      ch.snr_db = spec.snr_db;
      break;
  }
  ComplexFrame rx = apply_channel(tx, ch, noise_seed);
  if (spec.preprocess) rx = spec.preprocess(rx);
  rx.label = spec.pool[cls];
  return rx;
}

}  // namespace

nn::Dataset make_dataset(const DatasetSpec& spec) {
  if (spec.pool.empty() || spec.frames_per_class == 0)
    throw std::invalid_argument("make_dataset: empty pool or zero frame count");
  const std::size_t classes = spec.pool.size();
  const std::size_t count = classes * spec.frames_per_class;
  nn::Dataset ds;
  ds.inputs = nn::Tensor({count, 1, spec.grid.p_r, spec.grid.p_theta});
  ds.targets = nn::Tensor({count, classes});
  const std::size_t pix = spec.grid.p_r * spec.grid.p_theta;
  parallel_for(count, [&](std::size_t idx) {
    const std::size_t cls = idx / spec.frames_per_class;
    const std::size_t i = idx % spec.frames_per_class;
    ComplexFrame rx = received_frame(spec, cls, i);
    GridImage img = frame_to_image(rx, spec.feature, spec.grid);
    std::copy(img.pixels.begin(), img.pixels.end(), ds.inputs.data.begin() + idx * pix);
    ds.targets(idx, cls) = 1.0;
  });
  return ds;
}

std::vector<ComplexFrame> make_frames(const DatasetSpec& spec) {
  if (spec.pool.empty()) throw std::invalid_argument("make_frames: empty pool");
  const std::size_t count = spec.pool.size() * spec.frames_per_class;
  std::vector<ComplexFrame> out(count);
  parallel_for(count, [&](std::size_t idx) {
    const std::size_t cls = idx / spec.frames_per_class;
    const std::size_t i = idx % spec.frames_per_class;
    out[idx] = received_frame(spec, cls, i);
  });
  return out;
}

TrainAmcResult train_amc(nn::Model& model, const nn::Dataset& data, const nn::TrainConfig& cfg) {
  TrainAmcResult res;
  res.history = nn::train(model, data, cfg, nn::LossKind::CrossEntropy);
  res.overhead.model_size = model.param_count();
  res.overhead.epochs = res.history.epochs.size();
  res.overhead.training_data = data.count();
  return res;
}

EvalResult evaluate(nn::Model& model, const nn::Dataset& data) {
  const std::size_t n = data.count();
  if (n == 0) throw std::invalid_argument("evaluate: empty dataset");
  const std::size_t classes = data.targets.dim(1);
  EvalResult res;
  res.confusion.assign(classes, std::vector<std::size_t>(classes, 0));
  std::size_t correct = 0;
  const std::size_t batch_size = 256;
  for (std::size_t start = 0; start < n; start += batch_size) {
    std::vector<std::size_t> idx(std::min(batch_size, n - start));
    std::iota(idx.begin(), idx.end(), start);
    nn::Dataset batch = nn::gather(data, idx);
    nn::Tensor preds = model.infer(batch.inputs);
    for (std::size_t i = 0; i < idx.size(); ++i) {
      std::size_t truth = 0, guess = 0;
      for (std::size_t j = 1; j < classes; ++j) {
        if (batch.targets(i, j) > batch.targets(i, truth)) truth = j;
        if (preds(i, j) > preds(i, guess)) guess = j;
      }
      ++res.confusion[truth][guess];
      if (truth == guess) ++correct;
    }
  }
  res.accuracy = static_cast<double>(correct) / static_cast<double>(n);
  return res;
}

void save_dataset(const std::string& path, const nn::Dataset& data, const nlohmann::json& meta) {
  nlohmann::json manifest;
  manifest["version"] = 1;
  manifest["input_shape"] = data.inputs.shape;
  manifest["target_shape"] = data.targets.shape;
  manifest["meta"] = meta;
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  os << manifest.dump() << '\n';
  for (double v : data.inputs.data) detail::put_f64_le(os, v);
  for (double v : data.targets.data) detail::put_f64_le(os, v);
  if (!os) throw std::runtime_error("write failed: " + path);
}

std::pair<nn::Dataset, nlohmann::json> load_dataset(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open: " + path);
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("missing dataset manifest: " + path);
  nlohmann::json manifest = nlohmann::json::parse(line, nullptr, false);
  if (manifest.is_discarded() || manifest.value("version", 0) != 1)
    throw std::runtime_error("bad dataset manifest: " + path);
  nn::Dataset ds;
  ds.inputs = nn::Tensor(manifest.at("input_shape").get<std::vector<std::size_t>>());
  ds.targets = nn::Tensor(manifest.at("target_shape").get<std::vector<std::size_t>>());
  for (double& v : ds.inputs.data) v = detail::get_f64_le(is);
  for (double& v : ds.targets.data) v = detail::get_f64_le(is);
  return {std::move(ds), manifest.value("meta", nlohmann::json::object())};
}

}  // namespace amc
