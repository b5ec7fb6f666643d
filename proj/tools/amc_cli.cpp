// Command-line front end: simulation, dataset building, training, evaluation,
// Monte Carlo sweeps, retraining experiments, complexity reports, and image
// export. Results go to files; stdout carries a one-line summary.

#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "amc/bench.hpp"
#include "amc/iq_file.hpp"
#include "amc/nn/checkpoint.hpp"

namespace fs = std::filesystem;
using namespace amc;

namespace {

ExperimentConfig resolve_config(const std::string& path) {
  if (path.empty()) return {};
  return load_config(path);
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  os << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"accumulated-polar-feature modulation classification toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  app.add_option("--config", config_path, "JSON experiment config; flags override")
      ->configurable(false);
  app.fallthrough();  // lets --config appear after the subcommand name too

  // simulate
  auto* sim = app.add_subcommand("simulate", "generate a frame and write an IQ file");
  std::string sim_mod = "qpsk", sim_out = "frame.iqb";
  std::size_t sim_n = 1000;
  double sim_snr = 8.0, sim_a = 1.0, sim_theta = 0.0, sim_f0 = 0.0;
  std::uint64_t sim_seed = 1;
  bool sim_noiseless = false;
  sim->add_option("--mod", sim_mod, "qpsk|8psk|16qam|64qam");
  sim->add_option("--n", sim_n, "symbols per frame");
  sim->add_option("--snr", sim_snr, "SNR in dB");
  sim->add_flag("--noiseless", sim_noiseless, "disable noise");
  sim->add_option("--a", sim_a, "amplitude factor");
  sim->add_option("--theta", sim_theta, "phase offset (rad)");
  sim->add_option("--f0", sim_f0, "frequency offset (cycles/sample)");
  sim->add_option("--seed", sim_seed, "RNG seed");
  sim->add_option("--out", sim_out, "output IQ file");

  // dataset
  auto* dat = app.add_subcommand("dataset", "build a labeled image dataset");
  std::string dat_feature = "accumulated_polar", dat_mode = "awgn", dat_out = "dataset.bin";
  std::size_t dat_frames = 1000;
  double dat_snr = 8.0;
  std::uint64_t dat_seed = 1;
  dat->add_option("--feature", dat_feature, "iq|polar_binary|accumulated_polar|soft_polar");
  dat->add_option("--channel", dat_mode, "awgn|fading");
  dat->add_option("--frames", dat_frames, "frames per class");
  dat->add_option("--snr", dat_snr, "SNR in dB");
  dat->add_option("--seed", dat_seed, "RNG seed");
  dat->add_option("--out", dat_out, "output dataset file");

  // train
  auto* trn = app.add_subcommand("train", "train the CNN classifier or the channel estimator");
  std::string trn_kind = "cnn", trn_data, trn_out = "model.ckpt", trn_channel = "fading";
  std::size_t trn_t = 2, trn_pairs = 200;
  double trn_snr = 0.0;
  std::uint64_t trn_seed = 1;
  trn->add_option("--kind", trn_kind, "cnn|ce");
  trn->add_option("--data", trn_data, "dataset file (cnn)");
  trn->add_option("--t", trn_t, "model size index");
  trn->add_option("--pairs", trn_pairs, "training pairs per class (ce)");
  trn->add_option("--snr", trn_snr, "SNR for generated CE pairs");
  trn->add_option("--channel", trn_channel, "awgn|fading (ce pairs)");
  trn->add_option("--seed", trn_seed, "RNG seed");
  trn->add_option("--out", trn_out, "output checkpoint");

  // evaluate
  auto* evl = app.add_subcommand("evaluate", "evaluate a checkpoint on a dataset");
  std::string evl_model, evl_data, evl_out = "evaluation.csv";
  evl->add_option("--model", evl_model, "checkpoint")->required();
  evl->add_option("--data", evl_data, "dataset file")->required();
  evl->add_option("--out", evl_out, "output CSV");

  // sweep
  auto* swp = app.add_subcommand("sweep", "Monte Carlo accuracy sweep");
  std::string swp_out_dir;
  std::uint64_t swp_seed = 0;
  bool swp_seed_set = false, swp_out_set = false;
  swp->add_option("--seed", swp_seed, "override config seed")->each([&](const std::string&) {
    swp_seed_set = true;
  });
  swp->add_option("--out", swp_out_dir, "output directory")->each([&](const std::string&) {
    swp_out_set = true;
  });

  // retrain
  auto* ret = app.add_subcommand("retrain", "time-varying channel retraining experiment");
  std::string ret_out_dir;
  double ret_snr = 10.0;
  std::uint64_t ret_seed = 0;
  bool ret_seed_set = false, ret_out_set = false;
  ret->add_option("--snr", ret_snr, "SNR in dB");
  ret->add_option("--seed", ret_seed, "override config seed")->each([&](const std::string&) {
    ret_seed_set = true;
  });
  ret->add_option("--out", ret_out_dir, "output directory")->each([&](const std::string&) {
    ret_out_set = true;
  });

  // complexity
  auto* cpx = app.add_subcommand("complexity", "per-frame op counts and measured times");
  std::string cpx_out = "complexity.csv";
  std::size_t cpx_n = 1000;
  bool cpx_no_measure = false;
  cpx->add_option("--n", cpx_n, "symbol length");
  cpx->add_option("--out", cpx_out, "output CSV");
  cpx->add_flag("--no-measure", cpx_no_measure, "skip wall-clock measurements");

  // export-image
  auto* exp = app.add_subcommand("export-image", "project an IQ file to CSV/PGM images");
  std::string exp_in, exp_feature = "accumulated_polar", exp_csv, exp_pgm;
  exp->add_option("--in", exp_in, "input IQ file")->required();
  exp->add_option("--feature", exp_feature, "iq|polar_binary|accumulated_polar|soft_polar");
  exp->add_option("--csv", exp_csv, "output CSV matrix");
  exp->add_option("--pgm", exp_pgm, "output PGM image");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) {
      ComplexFrame tx = generate_frame(mod_from_name(sim_mod), sim_n, sim_seed);
      ChannelParams ch;
      ch.a = sim_a;
      ch.theta = sim_theta;
      ch.f0 = sim_f0;
      ch.snr_db = sim_noiseless ? kNoiselessSnrDb : sim_snr;
      ComplexFrame rx = apply_channel(tx, ch, derive_seed(sim_seed, 1));
      write_iq_file(sim_out, rx);
      std::cout << "wrote " << sim_out << " (" << sim_n << " samples, " << sim_mod << ")\n";
      return 0;
    }
    if (dat->parsed()) {
      ExperimentConfig cfg = resolve_config(config_path);
      DatasetSpec spec;
      spec.pool = cfg.pool;
      spec.frames_per_class = dat_frames;
      spec.n = cfg.n;
      spec.snr_db = dat_snr;
      spec.mode = channel_mode_from_name(dat_mode);
      spec.feature = feature_from_name(dat_feature);
      spec.grid = cfg.grid;
      spec.seed = dat_seed;
      nn::Dataset ds = make_dataset(spec);
      nlohmann::json meta;
      meta["feature"] = dat_feature;
      meta["snr_db"] = dat_snr;
      meta["seed"] = dat_seed;
      meta["channel"] = dat_mode;
      meta["classes"] = nlohmann::json::array();
      for (Modulation m : spec.pool) meta["classes"].push_back(mod_name(m));
      save_dataset(dat_out, ds, meta);
      std::cout << "wrote " << dat_out << " (" << ds.count() << " images)\n";
      return 0;
    }
    if (trn->parsed()) {
      ExperimentConfig cfg = resolve_config(config_path);
      cfg.train.rng_seed = trn_seed;
      if (trn_kind == "cnn") {
        if (trn_data.empty()) throw std::runtime_error("train --kind cnn needs --data");
        auto [ds, meta] = load_dataset(trn_data);
        CnnConfig mc;
        mc.t = trn_t;
        mc.p_r = ds.inputs.dim(2);
        mc.p_theta = ds.inputs.dim(3);
        nn::Model model = build_cnn(mc, derive_seed(trn_seed, 0x1417ULL));
        TrainAmcResult res = train_amc(model, ds, cfg.train);
        nlohmann::json meta_out;
        meta_out["kind"] = "cnn";
        meta_out["t"] = trn_t;
        meta_out["dataset_meta"] = meta;
        meta_out["epochs"] = res.overhead.epochs;
        meta_out["model_size"] = res.overhead.model_size;
        meta_out["training_overhead"] = res.overhead.product();
        nn::save_model(trn_out, model, meta_out);
        std::cout << "wrote " << trn_out << " (params=" << res.overhead.model_size
                  << ", epochs=" << res.overhead.epochs
                  << ", overhead=" << res.overhead.product() << ")\n";
      } else if (trn_kind == "ce") {
        CeModel ce = build_ce(derive_seed(trn_seed, 0xCE00ULL));
        std::vector<CePair> pairs;
        const std::size_t per_class = trn_pairs;
        for (std::size_t c = 0; c < cfg.pool.size(); ++c)
          for (std::size_t i = 0; i < per_class; ++i) {
            std::uint64_t s = derive_seed(trn_seed, c * 100003ULL + i);
            ComplexFrame tx = generate_frame(cfg.pool[c], cfg.n, s);
            ChannelParams ch;
            ch.snr_db = trn_snr;
            if (trn_channel == "fading") ch = draw_fading_channel(trn_snr, derive_seed(s, 2));
            pairs.push_back({apply_channel(tx, ch, derive_seed(s, 3)), tx});
          }
        nn::TrainConfig ce_cfg = cfg.train;
        ce_cfg.max_epochs = std::max<std::size_t>(ce_cfg.max_epochs, 400);
        ce_cfg.patience = std::max<std::size_t>(ce_cfg.patience, 25);
        nn::TrainHistory hist = train_ce_offline(ce, pairs, ce_cfg);
        nlohmann::json meta_out;
        meta_out["kind"] = "ce";
        meta_out["epochs"] = hist.epochs.size();
        nn::save_model(trn_out, ce.net, meta_out);
        std::cout << "wrote " << trn_out << " (epochs=" << hist.epochs.size() << ")\n";
      } else {
        throw std::runtime_error("unknown train kind: " + trn_kind);
      }
      return 0;
    }
    if (evl->parsed()) {
      auto loaded = nn::load_model(evl_model);
      auto [ds, meta] = load_dataset(evl_data);
      EvalResult res = evaluate(loaded.model, ds);
      std::ostringstream os;
      os << "snr_db,feature_kind,t,seed,accuracy\n";
      os << meta.value("snr_db", 0.0) << ',' << meta.value("feature", std::string("?")) << ','
         << loaded.meta.value("t", 0) << ',' << meta.value("seed", 0) << ',' << res.accuracy
         << '\n';
      os << "true_class";
      auto classes = meta.value("classes", nlohmann::json::array());
      for (const auto& c : classes) os << ",pred_" << c.get<std::string>();
      os << '\n';
      for (std::size_t i = 0; i < res.confusion.size(); ++i) {
        os << (i < classes.size() ? classes[i].get<std::string>() : std::to_string(i));
        for (std::size_t j = 0; j < res.confusion[i].size(); ++j) os << ',' << res.confusion[i][j];
        os << '\n';
      }
      write_text(evl_out, os.str());
      std::cout << "accuracy " << res.accuracy << " -> " << evl_out << "\n";
      return 0;
    }
    if (swp->parsed()) {
      ExperimentConfig cfg = resolve_config(config_path);
      if (swp_seed_set) cfg.seed = swp_seed;
      if (swp_out_set) cfg.out_dir = swp_out_dir;
      fs::create_directories(cfg.out_dir);
      SweepResults res = run_sweep(cfg);
      write_text((fs::path(cfg.out_dir) / "sweep.csv").string(), sweep_csv(res));
      write_text((fs::path(cfg.out_dir) / "confusion.csv").string(), confusion_csv(res));
      std::cout << "wrote " << cfg.out_dir << "/sweep.csv (" << res.cells.size() << " cells)\n";
      return 0;
    }
    if (ret->parsed()) {
      ExperimentConfig cfg = resolve_config(config_path);
      if (ret_seed_set) cfg.seed = ret_seed;
      if (ret_out_set) cfg.out_dir = ret_out_dir;
      fs::create_directories(cfg.out_dir);
      auto rows = run_retrain_experiment(cfg, ret_snr);
      write_text((fs::path(cfg.out_dir) / "retrain.csv").string(), retrain_csv(rows));
      std::cout << "wrote " << cfg.out_dir << "/retrain.csv (" << rows.size() << " rows)\n";
      return 0;
    }
    if (cpx->parsed()) {
      ExperimentConfig cfg = resolve_config(config_path);
      cfg.n = cpx_n;
      auto rows = report_complexity(cfg, !cpx_no_measure);
      write_text(cpx_out, complexity_csv(rows));
      std::cout << "wrote " << cpx_out << " (" << rows.size() << " classifiers)\n";
      return 0;
    }
    if (exp->parsed()) {
      ExperimentConfig cfg = resolve_config(config_path);
      ComplexFrame frame = read_iq_file(exp_in);
      GridImage img = frame_to_image(frame, feature_from_name(exp_feature), cfg.grid);
      if (exp_csv.empty() && exp_pgm.empty())
        throw std::runtime_error("export-image: need --csv and/or --pgm");
      if (!exp_csv.empty()) write_image_csv(img, exp_csv);
      if (!exp_pgm.empty()) write_image_pgm(img, exp_pgm);
      std::cout << "exported " << exp_in << " as " << exp_feature << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
