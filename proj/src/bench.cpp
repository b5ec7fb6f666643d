#include "amc/bench.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "amc/nn/checkpoint.hpp"

namespace amc {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

double now_seconds() {
  return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

}  // namespace

ExperimentConfig config_from_json(const nlohmann::json& j) {
  static const std::set<std::string> known = {
      "pool",     "snr_list",    "n",           "train_frames_per_class",
      "test_frames_per_class",   "channel_mode", "feature",
      "t",        "trials_per_class", "seed",   "delta",
      "grid",     "hlrt",        "train",       "classifiers",
      "retrain_frames_per_class", "retrain_epochs", "cnn_checkpoint",
      "ce_checkpoint", "out_dir"};
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!known.count(it.key())) throw std::invalid_argument("unknown config field: " + it.key());

  ExperimentConfig cfg;
  if (j.contains("pool")) {
    cfg.pool.clear();
    for (const auto& name : j.at("pool")) cfg.pool.push_back(mod_from_name(name));
    if (cfg.pool.empty()) throw std::invalid_argument("config field pool is empty");
  }
  if (j.contains("snr_list")) cfg.snr_list = j.at("snr_list").get<std::vector<double>>();
  if (j.contains("n")) cfg.n = j.at("n").get<std::size_t>();
  if (j.contains("train_frames_per_class"))
    cfg.train_frames_per_class = j.at("train_frames_per_class").get<std::size_t>();
  if (j.contains("test_frames_per_class"))
    cfg.test_frames_per_class = j.at("test_frames_per_class").get<std::size_t>();
  if (j.contains("channel_mode")) {
    cfg.channel_mode = j.at("channel_mode").get<std::string>();
    if (cfg.channel_mode != "awgn" && cfg.channel_mode != "fading" &&
        cfg.channel_mode != "time_varying")
      throw std::invalid_argument("invalid config field channel_mode: " + cfg.channel_mode);
  }
  if (j.contains("feature")) cfg.feature = feature_from_name(j.at("feature").get<std::string>());
  if (j.contains("t")) cfg.t = j.at("t").get<std::size_t>();
  if (j.contains("trials_per_class"))
    cfg.trials_per_class = j.at("trials_per_class").get<std::size_t>();
  if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("delta")) {
    cfg.delta = j.at("delta").get<double>();
    if (cfg.delta < 0.0) throw std::invalid_argument("invalid config field delta: negative");
  }
  if (j.contains("grid")) {
    const auto& g = j.at("grid");
    if (g.contains("r0")) cfg.grid.r0 = g.at("r0").get<double>();
    if (g.contains("r1")) cfg.grid.r1 = g.at("r1").get<double>();
    if (g.contains("theta0")) cfg.grid.theta0 = g.at("theta0").get<double>();
    if (g.contains("theta1")) cfg.grid.theta1 = g.at("theta1").get<double>();
    if (g.contains("p_r")) cfg.grid.p_r = g.at("p_r").get<std::size_t>();
    if (g.contains("p_theta")) cfg.grid.p_theta = g.at("p_theta").get<std::size_t>();
    if (g.contains("sigma")) cfg.grid.sigma = g.at("sigma").get<double>();
    cfg.grid.validate();
  }
  if (j.contains("hlrt")) {
    const auto& h = j.at("hlrt");
    if (h.contains("amplitudes"))
      cfg.hlrt.amplitudes = h.at("amplitudes").get<std::vector<double>>();
    if (h.contains("phases_deg")) {
      cfg.hlrt.phases.clear();
      for (double d : h.at("phases_deg").get<std::vector<double>>())
        cfg.hlrt.phases.push_back(d * std::numbers::pi / 180.0);
    }
    if (cfg.hlrt.amplitudes.empty() || cfg.hlrt.phases.empty())
      throw std::invalid_argument("invalid config field hlrt: empty grid");
  }
  if (j.contains("train")) {
    const auto& t = j.at("train");
    if (t.contains("batch_size")) cfg.train.batch_size = t.at("batch_size").get<std::size_t>();
    if (t.contains("max_epochs")) cfg.train.max_epochs = t.at("max_epochs").get<std::size_t>();
    if (t.contains("patience")) cfg.train.patience = t.at("patience").get<std::size_t>();
    if (t.contains("validation_ratio"))
      cfg.train.validation_ratio = t.at("validation_ratio").get<double>();
    if (t.contains("adadelta_rho")) cfg.train.adadelta_rho = t.at("adadelta_rho").get<double>();
    if (t.contains("adadelta_eps")) cfg.train.adadelta_eps = t.at("adadelta_eps").get<double>();
    if (t.contains("rng_seed")) cfg.train.rng_seed = t.at("rng_seed").get<std::uint64_t>();
  }
  if (j.contains("classifiers"))
    cfg.classifiers = j.at("classifiers").get<std::vector<std::string>>();
  if (j.contains("retrain_frames_per_class"))
    cfg.retrain_frames_per_class = j.at("retrain_frames_per_class").get<std::vector<std::size_t>>();
  if (j.contains("retrain_epochs")) cfg.retrain_epochs = j.at("retrain_epochs").get<std::size_t>();
  if (j.contains("cnn_checkpoint")) cfg.cnn_checkpoint = j.at("cnn_checkpoint").get<std::string>();
  if (j.contains("ce_checkpoint")) cfg.ce_checkpoint = j.at("ce_checkpoint").get<std::string>();
  if (j.contains("out_dir")) cfg.out_dir = j.at("out_dir").get<std::string>();
  return cfg;
}

nlohmann::json config_to_json(const ExperimentConfig& cfg) {
  nlohmann::json j;
  j["pool"] = nlohmann::json::array();
  for (Modulation m : cfg.pool) j["pool"].push_back(mod_name(m));
  j["snr_list"] = cfg.snr_list;
  j["n"] = cfg.n;
  j["train_frames_per_class"] = cfg.train_frames_per_class;
  j["test_frames_per_class"] = cfg.test_frames_per_class;
  j["channel_mode"] = cfg.channel_mode;
  j["feature"] = feature_name(cfg.feature);
  j["t"] = cfg.t;
  j["trials_per_class"] = cfg.trials_per_class;
  j["seed"] = cfg.seed;
  j["delta"] = cfg.delta;
  j["grid"] = {{"r0", cfg.grid.r0},         {"r1", cfg.grid.r1},
               {"theta0", cfg.grid.theta0}, {"theta1", cfg.grid.theta1},
               {"p_r", cfg.grid.p_r},       {"p_theta", cfg.grid.p_theta},
               {"sigma", cfg.grid.sigma}};
  j["hlrt"] = {{"amplitudes", cfg.hlrt.amplitudes}};
  std::vector<double> deg;
  for (double p : cfg.hlrt.phases) deg.push_back(p * 180.0 / std::numbers::pi);
  j["hlrt"]["phases_deg"] = deg;
  j["train"] = {{"batch_size", cfg.train.batch_size},
                {"max_epochs", cfg.train.max_epochs},
                {"patience", cfg.train.patience},
                {"validation_ratio", cfg.train.validation_ratio},
                {"adadelta_rho", cfg.train.adadelta_rho},
                {"adadelta_eps", cfg.train.adadelta_eps},
                {"rng_seed", cfg.train.rng_seed}};
  j["classifiers"] = cfg.classifiers;
  j["retrain_frames_per_class"] = cfg.retrain_frames_per_class;
  j["retrain_epochs"] = cfg.retrain_epochs;
  j["cnn_checkpoint"] = cfg.cnn_checkpoint;
  j["ce_checkpoint"] = cfg.ce_checkpoint;
  j["out_dir"] = cfg.out_dir;
  return j;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open config: " + path);
  nlohmann::json j = nlohmann::json::parse(is, nullptr, false);
  if (j.is_discarded()) throw std::runtime_error("config is not valid JSON: " + path);
  return config_from_json(j);
}

SweepResults run_sweep(const ExperimentConfig& cfg) {
  SweepResults results;
  results.pool = cfg.pool;
  if (cfg.trials_per_class == 0) return results;  // empty table, success
  const std::size_t classes = cfg.pool.size();

  // CNN-backed classifiers need their checkpoints up front.
  nn::Model cnn;
  CeModel ce;
  bool have_cnn = false, have_ce = false;
  for (const auto& name : cfg.classifiers) {
    if ((name == "cnn" || name == "cnn_ce") && !have_cnn) {
      if (cfg.cnn_checkpoint.empty())
        throw std::invalid_argument("sweep classifier " + name + " needs cnn_checkpoint");
      cnn = nn::load_model(cfg.cnn_checkpoint).model;
      have_cnn = true;
    }
    if (name == "cnn_ce" && !have_ce) {
      if (cfg.ce_checkpoint.empty())
        throw std::invalid_argument("sweep classifier cnn_ce needs ce_checkpoint");
      ce.net = nn::load_model(cfg.ce_checkpoint).model;
      have_ce = true;
    }
  }

  for (const auto& name : cfg.classifiers) {
    for (std::size_t si = 0; si < cfg.snr_list.size(); ++si) {
      const double snr = cfg.snr_list[si];
      const double n0 = snr_to_noise_power(snr);
      SweepCell cell;
      cell.classifier = name;
      cell.snr_db = snr;
      cell.trials = cfg.trials_per_class;
      cell.confusion.assign(classes, std::vector<std::size_t>(classes, 0));
      const std::size_t total = classes * cfg.trials_per_class;
      std::vector<std::size_t> guesses(total);
      const std::uint64_t cell_seed = derive_seed(cfg.seed, fnv1a(name) ^ (si * 0x51ED2700ULL));
      parallel_for(total, [&](std::size_t idx) {
        const std::size_t cls = idx / cfg.trials_per_class;
        const std::uint64_t s0 = derive_seed(cell_seed, idx * 3 + 0);
        const std::uint64_t s1 = derive_seed(cell_seed, idx * 3 + 1);
        const std::uint64_t s2 = derive_seed(cell_seed, idx * 3 + 2);
        ComplexFrame tx = generate_frame(cfg.pool[cls], cfg.n, s0);
        ChannelParams ch;
        ch.snr_db = snr;
        if (cfg.channel_mode != "awgn") ch = draw_fading_channel(snr, s1);
        ComplexFrame rx = apply_channel(tx, ch, s2);
        Modulation guess;
        if (name == "ml")
          guess = ml_classify(rx, cfg.pool, n0);
        else if (name == "cumulant")
          guess = cumulant_classify(rx, cfg.pool);
        else if (name == "hlrt")
          guess = hlrt_classify(rx, cfg.pool, n0, cfg.hlrt);
        else if (name == "cnn")
          guess = classify_cnn(cnn, rx, cfg.pool, cfg.feature, cfg.grid);
        else if (name == "cnn_ce") {
          // estimator calibrated to this trial's channel from golden pilots
          ComplexFrame comp = compensate_via_pilot_fit(ce, rx, cfg.pool, cfg.pool.size(),
                                                       default_pilot_fit_config(),
                                                       derive_seed(cell_seed, idx * 7 + 5));
          guess = classify_cnn(cnn, comp, cfg.pool, cfg.feature, cfg.grid);
        } else
          throw std::invalid_argument("unknown sweep classifier: " + name);
        auto it = std::find(cfg.pool.begin(), cfg.pool.end(), guess);
        guesses[idx] = static_cast<std::size_t>(it - cfg.pool.begin());
      });
      std::size_t correct = 0;
      for (std::size_t idx = 0; idx < total; ++idx) {
        const std::size_t cls = idx / cfg.trials_per_class;
        ++cell.confusion[cls][guesses[idx]];
        if (guesses[idx] == cls) ++correct;
      }
      cell.accuracy = total ? static_cast<double>(correct) / static_cast<double>(total) : 0.0;
      results.cells.push_back(std::move(cell));
    }
  }
  return results;
}

std::string sweep_csv(const SweepResults& r) {
  std::ostringstream os;
  os << "classifier,snr_db,trials_per_class,accuracy\n";
  for (const auto& c : r.cells)
    os << c.classifier << ',' << fmt(c.snr_db) << ',' << c.trials << ',' << fmt(c.accuracy)
       << '\n';
  return os.str();
}

std::string confusion_csv(const SweepResults& r) {
  std::ostringstream os;
  os << "classifier,snr_db,true_class";
  for (Modulation m : r.pool) os << ",pred_" << mod_name(m);
  os << '\n';
  for (const auto& c : r.cells)
    for (std::size_t i = 0; i < r.pool.size(); ++i) {
      os << c.classifier << ',' << fmt(c.snr_db) << ',' << mod_name(r.pool[i]);
      for (std::size_t j = 0; j < r.pool.size(); ++j) os << ',' << c.confusion[i][j];
      os << '\n';
    }
  return os.str();
}

std::vector<ComplexFrame> frames_under_channel(const std::vector<Modulation>& pool,
                                               const ChannelParams& ch, std::size_t n,
                                               std::size_t trials_per_class, std::uint64_t seed) {
  const std::size_t total = pool.size() * trials_per_class;
  std::vector<ComplexFrame> out(total);
  parallel_for(total, [&](std::size_t idx) {
    const std::size_t cls = idx / trials_per_class;
    ComplexFrame tx = generate_frame(pool[cls], n, derive_seed(seed, idx * 2));
    out[idx] = apply_channel(tx, ch, derive_seed(seed, idx * 2 + 1));
    out[idx].label = pool[cls];
  });
  return out;
}

std::vector<CePair> pairs_under_channel(const std::vector<Modulation>& pool,
                                        const ChannelParams& ch, std::size_t n,
                                        std::size_t pairs_per_class, std::uint64_t seed) {
  const std::size_t total = pool.size() * pairs_per_class;
  std::vector<CePair> out(total);
  parallel_for(total, [&](std::size_t idx) {
    const std::size_t cls = idx / pairs_per_class;
    ComplexFrame tx = generate_frame(pool[cls], n, derive_seed(seed, idx * 2));
    out[idx].golden = tx;
    out[idx].received = apply_channel(tx, ch, derive_seed(seed, idx * 2 + 1));
    out[idx].received.label = pool[cls];
  });
  return out;
}

double accuracy_under_channel(const std::function<Modulation(const ComplexFrame&)>& classify,
                              const std::vector<Modulation>& pool, const ChannelParams& ch,
                              std::size_t n, std::size_t trials_per_class, std::uint64_t seed) {
  auto frames = frames_under_channel(pool, ch, n, trials_per_class, seed);
  std::vector<unsigned char> ok(frames.size(), 0);
  parallel_for(frames.size(), [&](std::size_t idx) {
    ok[idx] = classify(frames[idx]) == *frames[idx].label ? 1 : 0;
  });
  std::size_t correct = 0;
  for (auto v : ok) correct += v;
  return frames.empty() ? 0.0 : static_cast<double>(correct) / static_cast<double>(frames.size());
}

RetrainSetup build_retrain_setup(const ExperimentConfig& cfg, double snr_db) {
  RetrainSetup s;
  s.pool = cfg.pool;
  s.grid = cfg.grid;
  s.n = cfg.n;
  s.base = draw_fading_channel(snr_db, derive_seed(cfg.seed, 0xBA5EULL));
  s.base.delta = cfg.delta;

  CnnConfig cnn_cfg;
  cnn_cfg.t = cfg.t;
  cnn_cfg.p_r = cfg.grid.p_r;
  cnn_cfg.p_theta = cfg.grid.p_theta;

  DatasetSpec dspec;
  dspec.pool = cfg.pool;
  dspec.frames_per_class = cfg.train_frames_per_class;
  dspec.n = cfg.n;
  dspec.snr_db = snr_db;
  dspec.mode = ChannelMode::Fixed;
  dspec.fixed_channel = s.base;
  dspec.grid = cfg.grid;
  dspec.seed = derive_seed(cfg.seed, 0xD5A1ULL);

  // System without CE: accumulated-polar images straight off the channel.
  dspec.feature = FeatureKind::AccumulatedPolar;
  s.cnn_plain = build_cnn(cnn_cfg, derive_seed(cfg.seed, 0xC4A1ULL));
  train_amc(s.cnn_plain, make_dataset(dspec), cfg.train);

  // CE trained on golden pairs from the same channel.
  s.ce = build_ce(derive_seed(cfg.seed, 0xCE01ULL));
  auto pairs = pairs_under_channel(cfg.pool, s.base, cfg.n,
                                   std::min<std::size_t>(cfg.train_frames_per_class, 50),
                                   derive_seed(cfg.seed, 0xCE02ULL));
  nn::TrainConfig ce_cfg = cfg.train;
  ce_cfg.max_epochs = 400;
  ce_cfg.patience = 25;
  train_ce_offline(s.ce, pairs, ce_cfg);

  // System with CE: soft images of compensated frames, the representation
  // the end-to-end mechanism differentiates through.
  dspec.feature = FeatureKind::SoftPolar;
  dspec.seed = derive_seed(cfg.seed, 0xD5A2ULL);
  CeModel* ce_ptr = &s.ce;
  dspec.preprocess = [ce_ptr](const ComplexFrame& f) {
    return compensate(f, estimate(*ce_ptr, f));
  };
  s.cnn_soft = build_cnn(cnn_cfg, derive_seed(cfg.seed, 0xC4A2ULL));
  train_amc(s.cnn_soft, make_dataset(dspec), cfg.train);

  auto plain_fn = [&](const ComplexFrame& f) {
    return classify_cnn(s.cnn_plain, f, s.pool, FeatureKind::AccumulatedPolar, s.grid);
  };
  auto ce_fn = [&](const ComplexFrame& f) {
    return classify_cnn_ce(s.ce, s.cnn_soft, f, s.pool, FeatureKind::SoftPolar, s.grid);
  };
  const std::uint64_t eval_seed = derive_seed(cfg.seed, 0xE7A1ULL);
  s.pre_drift_plain = accuracy_under_channel(plain_fn, s.pool, s.base, s.n,
                                             cfg.test_frames_per_class, eval_seed);
  s.pre_drift_ce =
      accuracy_under_channel(ce_fn, s.pool, s.base, s.n, cfg.test_frames_per_class, eval_seed);
  return s;
}

std::vector<RetrainRow> run_retrain_experiment(const ExperimentConfig& cfg, double snr_db) {
  RetrainSetup setup = build_retrain_setup(cfg, snr_db);
  ChannelParams drifted = evolve_channel(setup.base, derive_seed(cfg.seed, 0xD21F7ULL));

  const std::uint64_t eval_seed = derive_seed(cfg.seed, 0xE7A2ULL);
  auto measure_plain = [&](nn::Model& cnn) {
    return accuracy_under_channel(
        [&](const ComplexFrame& f) {
          return classify_cnn(cnn, f, setup.pool, FeatureKind::AccumulatedPolar, setup.grid);
        },
        setup.pool, drifted, setup.n, cfg.test_frames_per_class, eval_seed);
  };
  auto measure_ce = [&](CeModel& ce) {
    return accuracy_under_channel(
        [&](const ComplexFrame& f) {
          return classify_cnn_ce(ce, setup.cnn_soft, f, setup.pool, FeatureKind::SoftPolar,
                                 setup.grid);
        },
        setup.pool, drifted, setup.n, cfg.test_frames_per_class, eval_seed);
  };

  const double post_drift_plain = measure_plain(setup.cnn_plain);
  const double post_drift_ce = measure_ce(setup.ce);

  nn::TrainConfig online = cfg.train;
  online.batch_size = 10;
  online.max_epochs = cfg.retrain_epochs;
  online.patience = cfg.retrain_epochs;  // fixed budget, no early exit
  online.validation_ratio = 0.0;
  // The CE mechanisms see tiny frame counts; stretch their epoch budget so
  // the optimizer still gets a few hundred steps.
  auto ce_epochs = [&](std::size_t frames) {
    std::size_t steps_per_epoch = std::max<std::size_t>(1, frames / online.batch_size);
    return std::max(cfg.retrain_epochs, (std::size_t)300 / steps_per_epoch + 1);
  };

  std::vector<RetrainRow> rows;
  for (std::size_t frames_pc : cfg.retrain_frames_per_class) {
    const std::uint64_t data_seed = derive_seed(cfg.seed, 0xF00DULL + frames_pc);
    for (RetrainMechanism mech :
         {RetrainMechanism::CnnNoCe, RetrainMechanism::CeGolden, RetrainMechanism::CeEndToEnd}) {
      RetrainRow row;
      row.mechanism = mechanism_name(mech);
      row.frames_per_class = frames_pc;
      double t0 = now_seconds(), acc = 0.0;
      if (mech == RetrainMechanism::CnnNoCe) {
        row.pre_drift_acc = setup.pre_drift_plain;
        row.post_drift_acc = post_drift_plain;
        nn::Model cnn = nn::clone_model(setup.cnn_plain);
        auto frames = frames_under_channel(setup.pool, drifted, setup.n, frames_pc, data_seed);
        t0 = now_seconds();
        retrain_cnn_no_ce(cnn, frames, setup.pool, FeatureKind::AccumulatedPolar, setup.grid,
                          online);
        row.retraining_seconds = now_seconds() - t0;
        acc = measure_plain(cnn);
      } else if (mech == RetrainMechanism::CeGolden) {
        row.pre_drift_acc = setup.pre_drift_ce;
        row.post_drift_acc = post_drift_ce;
        CeModel ce;
        ce.net = nn::clone_model(setup.ce.net);
        auto pairs = pairs_under_channel(setup.pool, drifted, setup.n, frames_pc, data_seed);
        nn::TrainConfig golden_cfg = online;
        golden_cfg.max_epochs = golden_cfg.patience = ce_epochs(pairs.size());
        t0 = now_seconds();
        retrain_ce_golden(ce, pairs, golden_cfg);
        row.retraining_seconds = now_seconds() - t0;
        acc = measure_ce(ce);
      } else {
        row.pre_drift_acc = setup.pre_drift_ce;
        row.post_drift_acc = post_drift_ce;
        CeModel ce;
        ce.net = nn::clone_model(setup.ce.net);
        auto frames = frames_under_channel(setup.pool, drifted, setup.n, frames_pc, data_seed);
        t0 = now_seconds();
        retrain_ce_end_to_end(ce, setup.cnn_soft, frames, setup.pool, FeatureKind::SoftPolar,
                              setup.grid, online);
        row.retraining_seconds = now_seconds() - t0;
        acc = measure_ce(ce);
      }
      row.post_retrain_acc = acc;
      RetrainBudget budget = overhead_report(mech, frames_pc * setup.pool.size(), setup.n,
                                             setup.pool.size(), row.retraining_seconds);
      row.bits_per_label = budget.bits_per_label;
      row.transmission_overhead_bits = budget.transmission_overhead_bits;
      rows.push_back(row);
    }
  }
  return rows;
}

std::string retrain_csv(const std::vector<RetrainRow>& rows) {
  std::ostringstream os;
  os << "mechanism,frames_per_class,pre_drift_acc,post_drift_acc,post_retrain_acc,"
        "bits_per_label,transmission_overhead_bits,retraining_seconds\n";
  for (const auto& r : rows)
    os << r.mechanism << ',' << r.frames_per_class << ',' << fmt(r.pre_drift_acc) << ','
       << fmt(r.post_drift_acc) << ',' << fmt(r.post_retrain_acc) << ',' << r.bits_per_label
       << ',' << r.transmission_overhead_bits << ',' << fmt(r.retraining_seconds) << '\n';
  return os.str();
}

std::vector<ComplexityRow> report_complexity(const ExperimentConfig& cfg, bool measure) {
  std::vector<ComplexityRow> rows;
  const double snr = 8.0;
  const double n0 = snr_to_noise_power(snr);
  ComplexFrame probe = apply_channel(generate_frame(cfg.pool.front(), cfg.n, cfg.seed),
                                     ChannelParams{1.0, 0.0, 0.0, snr, 0.0},
                                     derive_seed(cfg.seed, 0x7157ULL));

  auto timed = [&](const std::function<void()>& fn) {
    if (!measure) return 0.0;
    const int reps = 3;
    double t0 = now_seconds();
    for (int r = 0; r < reps; ++r) fn();
    return (now_seconds() - t0) / reps;
  };

  {
    ComplexityRow row;
    row.ops = count_ops("ml", cfg.n, cfg.pool);
    row.measured_seconds_per_frame = timed([&] { ml_classify(probe, cfg.pool, n0); });
    rows.push_back(row);
  }
  {
    ComplexityRow row;
    row.ops = count_ops("cumulant", cfg.n, cfg.pool);
    row.measured_seconds_per_frame = timed([&] { cumulant_classify(probe, cfg.pool); });
    rows.push_back(row);
  }
  {
    CnnConfig iq_cfg;
    iq_cfg.t = 4;  // matched to the memory column of the op-count table
    iq_cfg.p_r = cfg.grid.p_r;
    iq_cfg.p_theta = cfg.grid.p_theta;
    nn::Model iq_model = build_cnn(iq_cfg, 1);
    ComplexityRow row;
    row.ops = count_ops("iq", cfg.n, cfg.pool, std::nullopt, cfg.grid);
    row.measured_seconds_per_frame =
        timed([&] { classify_cnn(iq_model, probe, cfg.pool, FeatureKind::Iq, cfg.grid); });
    rows.push_back(row);
  }
  {
    CnnConfig ap_cfg;
    ap_cfg.t = 2;
    ap_cfg.p_r = cfg.grid.p_r;
    ap_cfg.p_theta = cfg.grid.p_theta;
    nn::Model ap_model = build_cnn(ap_cfg, 1);
    ComplexityRow row;
    row.ops = count_ops("accu_polar", cfg.n, cfg.pool, std::nullopt, cfg.grid);
    row.measured_seconds_per_frame = timed(
        [&] { classify_cnn(ap_model, probe, cfg.pool, FeatureKind::SoftPolar, cfg.grid); });
    rows.push_back(row);

    ComplexityRow row_ce;
    row_ce.ops = count_ops("accu_polar_nnce", cfg.n, cfg.pool, std::nullopt, cfg.grid);
    CeModel ce = build_ce(1);
    row_ce.measured_seconds_per_frame = timed([&] {
      classify_cnn_ce(ce, ap_model, probe, cfg.pool, FeatureKind::SoftPolar, cfg.grid);
    });
    rows.push_back(row_ce);
  }
  {
    ComplexityRow row;
    row.ops = count_ops("hlrt", cfg.n, cfg.pool, cfg.hlrt);
    row.measured_seconds_per_frame =
        timed([&] { hlrt_classify(probe, cfg.pool, n0, cfg.hlrt); });
    rows.push_back(row);
  }
  return rows;
}

std::string complexity_csv(const std::vector<ComplexityRow>& rows) {
  std::ostringstream os;
  os << op_count_csv_header() << ",measured_seconds_per_frame\n";
  for (const auto& r : rows)
    os << op_count_csv_row(r.ops) << ',' << fmt(r.measured_seconds_per_frame) << '\n';
  return os.str();
}

}  // namespace amc
