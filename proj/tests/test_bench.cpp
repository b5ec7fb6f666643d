#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>

#include "amc/bench.hpp"

using namespace amc;

TEST_CASE("config defaults mirror the published simulation settings") {
  ExperimentConfig cfg;
  CHECK(cfg.pool.size() == 4);
  CHECK(cfg.snr_list == std::vector<double>({-4, -2, 0, 2, 4, 6, 8, 10, 12}));
  CHECK(cfg.n == 1000);
  CHECK(cfg.grid.p_r == 36);
  CHECK(cfg.grid.p_theta == 36);
  CHECK(cfg.grid.r0 == 0.0);
  CHECK(cfg.grid.r1 == 3.0);
  CHECK(cfg.grid.theta0 == doctest::Approx(-1.5707963267948966));
  CHECK(cfg.train.batch_size == 100);
  CHECK(cfg.train.validation_ratio == doctest::Approx(0.2));
  CHECK((cfg.delta == 0.3 || cfg.delta == 0.5));
}

TEST_CASE("config json round trip and field validation") {
  ExperimentConfig cfg;
  cfg.seed = 42;
  cfg.trials_per_class = 11;
  cfg.classifiers = {"ml", "hlrt"};
  nlohmann::json j = config_to_json(cfg);
  ExperimentConfig back = config_from_json(j);
  CHECK(back.seed == 42);
  CHECK(back.trials_per_class == 11);
  CHECK(back.classifiers == cfg.classifiers);
  CHECK(back.hlrt.amplitudes == cfg.hlrt.amplitudes);

  nlohmann::json bad = {{"frobnicate", 1}};
  CHECK_THROWS_WITH_AS(config_from_json(bad), "unknown config field: frobnicate",
                       std::invalid_argument);
  nlohmann::json bad_mode = {{"channel_mode", "underwater"}};
  CHECK_THROWS(config_from_json(bad_mode));
  nlohmann::json bad_delta = {{"delta", -0.2}};
  CHECK_THROWS(config_from_json(bad_delta));
  nlohmann::json bad_pool = {{"pool", nlohmann::json::array()}};
  CHECK_THROWS(config_from_json(bad_pool));
}

TEST_CASE("zero trials produce an empty results table") {
  ExperimentConfig cfg;
  cfg.trials_per_class = 0;
  cfg.snr_list = {0.0};
  SweepResults r = run_sweep(cfg);
  CHECK(r.cells.empty());
  CHECK(sweep_csv(r) == "classifier,snr_db,trials_per_class,accuracy\n");
}

TEST_CASE("sweep is deterministic and byte-identical per seed") {
  ExperimentConfig cfg;
  cfg.classifiers = {"ml", "cumulant"};
  cfg.snr_list = {4.0, 8.0};
  cfg.trials_per_class = 8;
  cfg.n = 200;
  cfg.seed = 77;
  SweepResults a = run_sweep(cfg);
  SweepResults b = run_sweep(cfg);
  CHECK(sweep_csv(a) == sweep_csv(b));
  CHECK(confusion_csv(a) == confusion_csv(b));
  CHECK(a.cells.size() == 4);
  // confusion rows sum to the per-class trial count
  for (const auto& cell : a.cells)
    for (const auto& row : cell.confusion) {
      std::size_t sum = 0;
      for (std::size_t v : row) sum += v;
      CHECK(sum == cfg.trials_per_class);
    }

  cfg.seed = 78;
  SweepResults c = run_sweep(cfg);
  CHECK(sweep_csv(a) != sweep_csv(c));  // different seeds, different draws
}

TEST_CASE("ml beats the cumulant baseline at moderate snr") {
  ExperimentConfig cfg;
  cfg.classifiers = {"ml", "cumulant"};
  cfg.snr_list = {4.0};
  cfg.trials_per_class = 30;
  cfg.n = 500;
  cfg.seed = 5;
  SweepResults r = run_sweep(cfg);
  REQUIRE(r.cells.size() == 2);
  CHECK(r.cells[0].classifier == "ml");
  CHECK(r.cells[0].accuracy > r.cells[1].accuracy);
}

TEST_CASE("frames and pairs under a channel are labeled and deterministic") {
  ChannelParams ch = draw_fading_channel(6.0, 3);
  std::vector<Modulation> pool(std::begin(kDefaultPool), std::end(kDefaultPool));
  auto frames = frames_under_channel(pool, ch, 100, 3, 9);
  CHECK(frames.size() == 12);
  for (std::size_t i = 0; i < frames.size(); ++i) CHECK(*frames[i].label == pool[i / 3]);
  auto again = frames_under_channel(pool, ch, 100, 3, 9);
  for (std::size_t i = 0; i < frames.size(); ++i) CHECK(frames[i].samples == again[i].samples);

  auto pairs = pairs_under_channel(pool, ch, 64, 2, 11);
  CHECK(pairs.size() == 8);
  for (const auto& p : pairs) {
    CHECK(p.golden.samples.size() == 64);
    CHECK(p.received.samples.size() == 64);
    // received differs from golden under a non-identity channel
    CHECK(p.received.samples != p.golden.samples);
  }
}

TEST_CASE("accuracy_under_channel agrees with a constant classifier") {
  std::vector<Modulation> pool(std::begin(kDefaultPool), std::end(kDefaultPool));
  ChannelParams ch;
  ch.snr_db = 10.0;
  double acc = accuracy_under_channel([](const ComplexFrame&) { return Modulation::Qpsk; }, pool,
                                      ch, 32, 5, 13);
  CHECK(acc == doctest::Approx(0.25));
}

TEST_CASE("complexity report carries the symbolic counts") {
  ExperimentConfig cfg;
  auto rows = report_complexity(cfg, /*measure=*/false);
  REQUIRE(rows.size() == 6);
  bool saw_cumulant = false, saw_hlrt = false;
  for (const auto& r : rows) {
    CHECK(r.measured_seconds_per_frame == 0.0);
    if (r.ops.classifier == "cumulant") {
      saw_cumulant = true;
      CHECK(r.ops.additions == 6000);
      CHECK(r.ops.multiplications == 16000);
    }
    if (r.ops.classifier == "hlrt") {
      saw_hlrt = true;
      CHECK(r.ops.n_a == cfg.hlrt.amplitudes.size());
    }
  }
  CHECK(saw_cumulant);
  CHECK(saw_hlrt);
  std::string csv = complexity_csv(rows);
  CHECK(csv.find("cumulant") != std::string::npos);
  CHECK(csv.find("accu_polar_nnce") != std::string::npos);
}

TEST_CASE("retrain experiment orchestration at micro scale") {
  ExperimentConfig cfg;
  cfg.n = 128;
  cfg.t = 0;
  cfg.train_frames_per_class = 100;
  cfg.test_frames_per_class = 25;
  cfg.train.batch_size = 50;
  cfg.train.max_epochs = 4;
  cfg.train.patience = 4;
  cfg.retrain_frames_per_class = {2};
  cfg.retrain_epochs = 5;
  cfg.seed = 99;
  auto rows = run_retrain_experiment(cfg, 10.0);
  REQUIRE(rows.size() == 3);  // one per mechanism at the single data size
  for (const auto& r : rows) {
    CHECK(r.frames_per_class == 2);
    CHECK(r.pre_drift_acc >= 0.0);
    CHECK(r.post_retrain_acc >= 0.0);
    CHECK(r.retraining_seconds >= 0.0);
  }
  // bits: s_mod mechanisms use log2(M) = 2 bits, golden uses 2N per frame
  CHECK(rows[0].mechanism == "cnn_no_ce");
  CHECK(rows[0].transmission_overhead_bits == 2 * 4 * 2);
  CHECK(rows[1].mechanism == "ce_golden");
  CHECK(rows[1].transmission_overhead_bits == 2 * 4 * 2 * 128);
  CHECK(rows[2].mechanism == "ce_end_to_end");
  CHECK(rows[2].transmission_overhead_bits == 2 * 4 * 2);
  CHECK(rows[1].bits_per_label == 2 * 128);
  std::string csv = retrain_csv(rows);
  CHECK(csv.find("mechanism,frames_per_class") == 0);
  CHECK(csv.find("bits_per_label") != std::string::npos);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
}

TEST_CASE("cli round trips and failure modes") {
  const char* cli = std::getenv("AMC_CLI");
  if (!cli) return;  // only wired up under ctest
  std::string base = cli;

  auto run = [](const std::string& cmd) { return std::system(cmd.c_str()); };

  CHECK(run(base + " simulate --mod qpsk --n 64 --snr 8 --seed 1 --out tmp_cli.iqb "
                   ">/dev/null") == 0);
  CHECK(run(base + " export-image --in tmp_cli.iqb --feature accumulated_polar "
                   "--csv tmp_cli.csv --pgm tmp_cli.pgm >/dev/null") == 0);
  std::ifstream img("tmp_cli.csv");
  CHECK(img.good());

  // missing config file fails with a nonzero exit and names the path
  CHECK(run(base + " sweep --config missing.json >/dev/null 2>tmp_cli.err") != 0);
  std::ifstream err("tmp_cli.err");
  std::string msg((std::istreambuf_iterator<char>(err)), std::istreambuf_iterator<char>());
  CHECK(msg.find("missing.json") != std::string::npos);

  CHECK(run(base + " complexity --n 1000 --no-measure --out tmp_cli_cpx.csv >/dev/null") == 0);
  std::ifstream cpx("tmp_cli_cpx.csv");
  std::string line;
  bool found = false;
  while (std::getline(cpx, line))
    if (line.find("cumulant") != std::string::npos)
      found = line.find(",6000,") != std::string::npos;
  CHECK(found);

  std::remove("tmp_cli.iqb");
  std::remove("tmp_cli.csv");
  std::remove("tmp_cli.pgm");
  std::remove("tmp_cli.err");
  std::remove("tmp_cli_cpx.csv");
}
