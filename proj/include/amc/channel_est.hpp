#pragma once

#include <string>
#include <vector>

#include "amc/cnn.hpp"
#include "amc/grid.hpp"
#include "amc/modem.hpp"
#include "amc/nn/train.hpp"

namespace amc {

// Tiny channel estimator: dense(2 -> 8, bias) -> ReLU -> dense(8 -> 2, bias),
// 42 trainable parameters. The raw outputs map to the compensation as
// delta_r = 1 + raw[0] (zero-initialized nets start at identity gain) and
// delta_theta = raw[1].
struct CeModel {
  nn::Model net;
};

CeModel build_ce(std::uint64_t init_seed);

struct Compensation {
  double delta_r = 1.0;
  double delta_theta = 0.0;
};

// (mean, standard deviation) of |y[n]| over the frame; throws on empty.
std::pair<double, double> extract_features(const ComplexFrame& frame);

Compensation estimate(CeModel& model, const ComplexFrame& frame);

// Row-vector-times-rotation-matrix compensation per sample:
//   I' =  I dr cos(dt) + Q dr sin(dt)
//   Q' = -I dr sin(dt) + Q dr cos(dt)
// i.e. multiplication by dr e^{-j dt}.
ComplexFrame compensate(const ComplexFrame& frame, const Compensation& comp);

// Gradients of the compensation w.r.t. (delta_r, delta_theta): accumulates
// over samples given upstream dL/dI'[n], dL/dQ'[n].
std::pair<double, double> compensate_backward(const ComplexFrame& frame, const Compensation& comp,
                                              const std::vector<double>& dip,
                                              const std::vector<double>& dqp);

struct CePair {
  ComplexFrame received;
  ComplexFrame golden;
};

// Minimizes the mean absolute complex error between
// compensate(received, estimate(received)) and golden, with Adadelta and
// early stopping on a validation split of the pairs.
nn::TrainHistory train_ce_offline(CeModel& model, const std::vector<CePair>& pairs,
                                  const nn::TrainConfig& cfg);

// Fig. 5(b): identical machinery to offline CE training, warm-started.
nn::TrainHistory retrain_ce_golden(CeModel& model, const std::vector<CePair>& pairs,
                                   const nn::TrainConfig& cfg);

// Fig. 5(a): continue training the CNN itself on images of the labeled
// frames. No-op on an empty frame list.
nn::TrainHistory retrain_cnn_no_ce(nn::Model& cnn, const std::vector<ComplexFrame>& frames,
                                   const std::vector<Modulation>& pool, FeatureKind feature,
                                   const GridConfig& grid, const nn::TrainConfig& cfg);

// Fig. 5(c): cross-entropy at the frozen CNN output backpropagates through
// the soft projection, the polar transform, and the compensation, updating
// only CE parameters. Requires FeatureKind::SoftPolar.
nn::TrainHistory retrain_ce_end_to_end(CeModel& model, nn::Model& frozen_cnn,
                                       const std::vector<ComplexFrame>& frames,
                                       const std::vector<Modulation>& pool, FeatureKind feature,
                                       const GridConfig& grid, const nn::TrainConfig& cfg);

// One gradient evaluation of the end-to-end chain on a frame batch; exposed
// for gradient verification. Returns (loss, dL/d ce-params flattened).
std::pair<double, std::vector<double>> ce_end_to_end_loss_and_grad(
    CeModel& model, nn::Model& frozen_cnn, const std::vector<ComplexFrame>& frames,
    const std::vector<Modulation>& pool, const GridConfig& grid);

enum class RetrainMechanism { CnnNoCe, CeGolden, CeEndToEnd };

std::string mechanism_name(RetrainMechanism m);
RetrainMechanism mechanism_from_name(const std::string& name);

struct RetrainBudget {
  RetrainMechanism mechanism = RetrainMechanism::CnnNoCe;
  std::size_t frames = 0;             // number of retraining data
  std::size_t bits_per_label = 0;     // log2(M) for s_mod, 2N for s_golden
  std::size_t transmission_overhead_bits = 0;
  double retraining_seconds = 0.0;    // measured, not predicted
};

RetrainBudget overhead_report(RetrainMechanism mechanism, std::size_t frames, std::size_t n,
                              std::size_t pool_size, double retraining_seconds = 0.0);

// Calibrates a clone of `base` to the frame's own channel: synthesizes
// `pilot_pairs` golden pilot pairs under that channel (frame.channel must be
// set), runs the offline MAE fit, and returns the compensated frame. This is
// how the estimator is deployed across changing channels; the across-channel
// fit is ill-posed because the amplitude features carry no phase information.
ComplexFrame compensate_via_pilot_fit(CeModel& base, const ComplexFrame& frame,
                                      const std::vector<Modulation>& pool,
                                      std::size_t pilot_pairs, const nn::TrainConfig& fit_cfg,
                                      std::uint64_t seed);

// Fit configuration used by the pilot calibration above when callers have no
// reason to customize it.
nn::TrainConfig default_pilot_fit_config();

// Image classification of a single frame, optionally compensating first.
Modulation classify_cnn(nn::Model& cnn, const ComplexFrame& frame,
                        const std::vector<Modulation>& pool, FeatureKind feature,
                        const GridConfig& grid);
Modulation classify_cnn_ce(CeModel& ce, nn::Model& cnn, const ComplexFrame& frame,
                           const std::vector<Modulation>& pool, FeatureKind feature,
                           const GridConfig& grid);

}  // namespace amc
