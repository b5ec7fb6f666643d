#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

#include "amc/cnn.hpp"

using namespace amc;

TEST_CASE("model family widths and output head") {
  CnnConfig cfg;
  cfg.t = 2;
  nn::Model m = build_cnn(cfg, 1);
  // conv(8) BN relu conv(4) BN relu gap dense(8) BN relu drop dense(4) BN
  // relu drop dense(4) softmax
  CHECK(m.layers.size() == 17);
  std::mt19937_64 rng(0);
  nn::Tensor x({2, 1, 36, 36});
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (auto& v : x.data) v = u(rng);
  nn::Tensor y = m.infer(x);
  REQUIRE(y.shape == std::vector<std::size_t>({2, 4}));
  for (std::size_t i = 0; i < 2; ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < 4; ++j) {
      CHECK(y(i, j) >= 0.0);
      sum += y(i, j);
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("parameter count is pure in the config and scales with t") {
  CnnConfig c2;
  c2.t = 2;
  nn::Model a = build_cnn(c2, 1);
  nn::Model b = build_cnn(c2, 99);
  CHECK(a.param_count() == b.param_count());

  CnnConfig c4 = c2;
  c4.t = 4;
  nn::Model big = build_cnn(c4, 1);
  // dominant conv term scales by 2^(2*dt) = 16
  double ratio = static_cast<double>(big.param_count()) / static_cast<double>(a.param_count());
  CHECK(ratio > 8.0);
  CHECK(ratio <= 16.0);
  // small model lands near the published ~1k size
  CHECK(a.param_count() > 900);
  CHECK(a.param_count() < 1300);
  CHECK(big.param_count() > 13000);
  CHECK(big.param_count() < 16000);
}

TEST_CASE("resolution too small for two convolutions is rejected") {
  CnnConfig cfg;
  cfg.p_r = 8;
  cfg.p_theta = 8;  // two 5x5 valid convs need at least 9
  CHECK_THROWS(build_cnn(cfg, 1));
}

TEST_CASE("dataset shapes, one-hot labels, determinism") {
  DatasetSpec spec;
  spec.frames_per_class = 10;
  spec.n = 200;
  spec.snr_db = 10.0;
  spec.seed = 5;
  nn::Dataset ds = make_dataset(spec);
  CHECK(ds.count() == 40);
  CHECK(ds.inputs.shape == std::vector<std::size_t>({40, 1, 36, 36}));
  CHECK(ds.targets.shape == std::vector<std::size_t>({40, 4}));
  for (std::size_t i = 0; i < 40; ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < 4; ++j) {
      CHECK((ds.targets(i, j) == 0.0 || ds.targets(i, j) == 1.0));
      sum += ds.targets(i, j);
    }
    CHECK(sum == 1.0);
  }
  nn::Dataset again = make_dataset(spec);
  CHECK(std::equal(ds.inputs.data.begin(), ds.inputs.data.end(), again.inputs.data.begin()));
}

TEST_CASE("image kinds and normalization ranges") {
  DatasetSpec spec;
  spec.frames_per_class = 2;
  spec.n = 500;
  spec.snr_db = 8.0;
  spec.seed = 7;
  for (FeatureKind k : {FeatureKind::Iq, FeatureKind::PolarBinary, FeatureKind::AccumulatedPolar,
                        FeatureKind::SoftPolar}) {
    spec.feature = k;
    nn::Dataset ds = make_dataset(spec);
    double mx = 0.0, mn = 1e300;
    for (double v : ds.inputs.data) {
      mx = std::max(mx, v);
      mn = std::min(mn, v);
    }
    CHECK(mn >= 0.0);
    CHECK(mx == doctest::Approx(1.0));
    if (k == FeatureKind::Iq || k == FeatureKind::PolarBinary)
      for (double v : ds.inputs.data) CHECK((v == 0.0 || v == 1.0));
  }
}

TEST_CASE("high-snr accumulated qpsk image concentrates its mass") {
  // Noiseless geometry puts QPSK on one radius ring and two folded angle
  // clusters (two pixels). At finite SNR each cluster blurs over roughly
  // +-2 sigma of complex noise per axis; the bound below is that footprint.
  DatasetSpec spec;
  spec.pool = {Modulation::Qpsk};
  spec.frames_per_class = 1;
  spec.n = 1000;
  spec.snr_db = 20.0;
  spec.seed = 9;
  auto mass_pixels = [&](const ComplexFrame& rx) {
    GridImage img = frame_to_image(rx, FeatureKind::AccumulatedPolar, spec.grid);
    std::vector<double> pix = img.pixels;
    std::sort(pix.begin(), pix.end(), std::greater<>());
    double total = 0.0;
    for (double v : pix) total += v;
    double cum = 0.0;
    std::size_t needed = 0;
    for (double v : pix) {
      cum += v;
      ++needed;
      if (cum >= 0.95 * total) break;
    }
    return needed;
  };
  const double sigma = std::sqrt(snr_to_noise_power(spec.snr_db) / 2.0);
  const double bins_r = 4.0 * sigma / spec.grid.dr() + 1.0;
  const double bins_t = 4.0 * sigma / spec.grid.dtheta() + 1.0;
  const auto bound = static_cast<std::size_t>(std::ceil(2.0 * bins_r * bins_t));
  std::size_t qpsk_needed = mass_pixels(make_frames(spec)[0]);
  CHECK(qpsk_needed >= 2);
  CHECK(qpsk_needed <= bound);

  // 64QAM spreads over many rings and angles, so its footprint is far wider.
  spec.pool = {Modulation::Qam64};
  std::size_t qam_needed = mass_pixels(make_frames(spec)[0]);
  CHECK(qpsk_needed * 3 < qam_needed);
}

TEST_CASE("train_amc reports the overhead product and reaches above-chance accuracy") {
  DatasetSpec spec;
  spec.frames_per_class = 40;
  spec.n = 512;
  spec.snr_db = 10.0;
  spec.seed = 11;
  nn::Dataset train_ds = make_dataset(spec);
  spec.seed = 12;
  nn::Dataset test_ds = make_dataset(spec);

  CnnConfig mc;
  mc.t = 2;
  nn::Model model = build_cnn(mc, 13);

  EvalResult before = evaluate(model, test_ds);
  CHECK(before.accuracy > 0.05);
  CHECK(before.accuracy < 0.60);  // untrained stays near chance

  nn::TrainConfig tc;
  tc.batch_size = 20;
  tc.max_epochs = 15;
  tc.patience = 15;
  tc.rng_seed = 14;
  TrainAmcResult res = train_amc(model, train_ds, tc);
  CHECK(res.overhead.model_size == model.param_count());
  CHECK(res.overhead.training_data == train_ds.count());
  CHECK(res.overhead.epochs == res.history.epochs.size());
  CHECK(res.overhead.product() ==
        static_cast<unsigned long long>(res.overhead.model_size) * res.overhead.epochs *
            res.overhead.training_data);

  EvalResult after = evaluate(model, test_ds);
  CHECK(after.accuracy > before.accuracy);
}

TEST_CASE("overhead metric is definitional") {
  OverheadMetric m;
  m.model_size = 1000;
  m.epochs = 10;
  m.training_data = 100;
  CHECK(m.product() == 1000000ULL);
}

TEST_CASE("evaluate confusion matrix sums to dataset size") {
  DatasetSpec spec;
  spec.frames_per_class = 5;
  spec.n = 100;
  spec.snr_db = 8.0;
  spec.seed = 21;
  nn::Dataset ds = make_dataset(spec);
  CnnConfig mc;
  mc.t = 0;
  nn::Model model = build_cnn(mc, 22);
  EvalResult res = evaluate(model, ds);
  std::size_t total = 0;
  for (std::size_t i = 0; i < res.confusion.size(); ++i) {
    std::size_t row = 0;
    for (std::size_t j = 0; j < res.confusion[i].size(); ++j) row += res.confusion[i][j];
    CHECK(row == 5);  // rows sum to per-class counts
    total += row;
  }
  CHECK(total == ds.count());
}

TEST_CASE("iq images confuse the nested psk pair more than accumulated polar") {
  auto nested_confusion = [](FeatureKind kind) {
    DatasetSpec spec;
    spec.frames_per_class = 200;
    spec.snr_db = 8.0;
    spec.feature = kind;
    spec.seed = 61;
    nn::Dataset train_ds = make_dataset(spec);
    DatasetSpec tspec = spec;
    tspec.frames_per_class = 100;
    tspec.seed = 62;
    nn::Dataset test_ds = make_dataset(tspec);
    CnnConfig mc;
    mc.t = 1;
    nn::Model model = build_cnn(mc, 63);
    nn::TrainConfig tc;
    tc.batch_size = 50;
    tc.max_epochs = 10;
    tc.patience = 10;
    tc.rng_seed = 64;
    train_amc(model, train_ds, tc);
    EvalResult res = evaluate(model, test_ds);
    // QPSK and 8PSK are pool indices 0 and 1
    return res.confusion[0][1] + res.confusion[1][0];
  };
  std::size_t iq_nested = nested_confusion(FeatureKind::Iq);
  std::size_t accu_nested = nested_confusion(FeatureKind::AccumulatedPolar);
  CHECK(iq_nested > accu_nested);
}

TEST_CASE("dataset file round-trips") {
  DatasetSpec spec;
  spec.frames_per_class = 3;
  spec.n = 64;
  spec.seed = 31;
  nn::Dataset ds = make_dataset(spec);
  nlohmann::json meta;
  meta["feature"] = "accumulated_polar";
  save_dataset("tmp_ds.bin", ds, meta);
  auto [back, meta2] = load_dataset("tmp_ds.bin");
  CHECK(meta2.at("feature") == "accumulated_polar");
  CHECK(back.inputs.shape == ds.inputs.shape);
  CHECK(std::equal(ds.inputs.data.begin(), ds.inputs.data.end(), back.inputs.data.begin()));
  CHECK(std::equal(ds.targets.data.begin(), ds.targets.data.end(), back.targets.data.begin()));
  std::remove("tmp_ds.bin");
}

TEST_CASE("feature name round trip") {
  for (FeatureKind k : {FeatureKind::Iq, FeatureKind::PolarBinary, FeatureKind::AccumulatedPolar,
                        FeatureKind::SoftPolar})
    CHECK(feature_from_name(feature_name(k)) == k);
  CHECK_THROWS(feature_from_name("wavelet"));
}
