#pragma once

#include <string>
#include <vector>

#include "amc/channel_est.hpp"
#include "amc/cnn.hpp"
#include "amc/cumulants.hpp"
#include "amc/likelihood.hpp"
#include "amc/op_counts.hpp"

namespace amc {

// Experiment settings; defaults mirror the Table II environment with
// desk-scale trial counts. Every field is reachable from the JSON config.
struct ExperimentConfig {
  std::vector<Modulation> pool{std::begin(kDefaultPool), std::end(kDefaultPool)};
  std::vector<double> snr_list{-4, -2, 0, 2, 4, 6, 8, 10, 12};
  std::size_t n = 1000;
  std::size_t train_frames_per_class = 2000;  // paper: 5000
  std::size_t test_frames_per_class = 250;    // paper: 1000
  std::string channel_mode = "awgn";          // awgn | fading | time_varying
  FeatureKind feature = FeatureKind::AccumulatedPolar;
  std::size_t t = 2;
  std::size_t trials_per_class = 200;  // paper: 1000
  std::uint64_t seed = 1;
  double delta = 0.3;  // Table II also exercises 0.5
  GridConfig grid{};
  HlrtGrid hlrt = HlrtGrid::desk_default();
  nn::TrainConfig train{};
  std::vector<std::string> classifiers{"ml", "cumulant"};
  std::vector<std::size_t> retrain_frames_per_class{1, 10, 100};
  std::size_t retrain_epochs = 50;
  std::string cnn_checkpoint;  // sweeps with the "cnn" classifier
  std::string ce_checkpoint;   // sweeps with the "cnn_ce" classifier
  std::string out_dir = ".";
};

ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& cfg);
ExperimentConfig load_config(const std::string& path);

struct SweepCell {
  std::string classifier;
  double snr_db = 0.0;
  std::size_t trials = 0;  // per class
  double accuracy = 0.0;
  std::vector<std::vector<std::size_t>> confusion;
};

struct SweepResults {
  std::vector<SweepCell> cells;
  std::vector<Modulation> pool;
};

// Monte Carlo accuracy per (classifier, snr) over fresh per-cell seeded
// frames. Supported classifiers: ml, cumulant, hlrt, cnn, cnn_ce.
SweepResults run_sweep(const ExperimentConfig& cfg);

std::string sweep_csv(const SweepResults& r);
std::string confusion_csv(const SweepResults& r);

// Trained systems on one fixed fading draw: a plain CNN on accumulated-polar
// images, and a CE + CNN stack on soft images of compensated frames (the
// representation the end-to-end mechanism differentiates through).
struct RetrainSetup {
  ChannelParams base;
  std::vector<Modulation> pool;
  GridConfig grid;
  std::size_t n = 0;
  nn::Model cnn_plain;
  CeModel ce;
  nn::Model cnn_soft;
  double pre_drift_plain = 0.0;
  double pre_drift_ce = 0.0;
};

RetrainSetup build_retrain_setup(const ExperimentConfig& cfg, double snr_db);

// Monte Carlo accuracy of a frame classifier under a fixed channel.
double accuracy_under_channel(const std::function<Modulation(const ComplexFrame&)>& classify,
                              const std::vector<Modulation>& pool, const ChannelParams& ch,
                              std::size_t n, std::size_t trials_per_class, std::uint64_t seed);

// Labeled received frames under a channel, trials_per_class per pool member.
std::vector<ComplexFrame> frames_under_channel(const std::vector<Modulation>& pool,
                                               const ChannelParams& ch, std::size_t n,
                                               std::size_t trials_per_class, std::uint64_t seed);

// Golden/received pairs under a channel for CE retraining.
std::vector<CePair> pairs_under_channel(const std::vector<Modulation>& pool,
                                        const ChannelParams& ch, std::size_t n,
                                        std::size_t pairs_per_class, std::uint64_t seed);

struct RetrainRow {
  std::string mechanism;
  std::size_t frames_per_class = 0;
  double pre_drift_acc = 0.0;
  double post_drift_acc = 0.0;
  double post_retrain_acc = 0.0;
  std::size_t bits_per_label = 0;
  std::size_t transmission_overhead_bits = 0;
  double retraining_seconds = 0.0;
};

// Drift the base channel by cfg.delta, then retrain each mechanism at each
// configured data size from the same pre-drift snapshot.
std::vector<RetrainRow> run_retrain_experiment(const ExperimentConfig& cfg, double snr_db);

std::string retrain_csv(const std::vector<RetrainRow>& rows);

struct ComplexityRow {
  OpCountReport ops;
  double measured_seconds_per_frame = 0.0;
};

// Symbolic per-frame counts for every supported classifier plus a measured
// wall-clock per-frame inference time on this host (informational).
std::vector<ComplexityRow> report_complexity(const ExperimentConfig& cfg, bool measure = true);

std::string complexity_csv(const std::vector<ComplexityRow>& rows);

}  // namespace amc
