#pragma once

#include <vector>

#include "amc/modem.hpp"

namespace amc {

// Candidate amplitude/phase hypotheses for the hybrid likelihood ratio test.
struct HlrtGrid {
  std::vector<double> amplitudes;
  std::vector<double> phases;  // radians

  // Paper spacing: amplitudes 0.2..1.0 step 0.05, phases 0..359 deg step 1.
  static HlrtGrid paper_default();
  // Coarser spacing for CPU-bound Monte Carlo runs.
  static HlrtGrid desk_default();
};

// Natural log of the AWGN mixture likelihood, evaluated per symbol via
// log-sum-exp over alphabet points. The observation is modeled as complex
// Gaussian of total variance noise_power around the constellation point, so
// the kernel is exp(-|y - A|^2 / noise_power) with per-symbol normalizer
// 1 / (M pi noise_power). Empty frame gives 0.
double ml_log_likelihood(const ComplexFrame& frame, Modulation mod, double noise_power);

// Argmax of ml_log_likelihood over the pool; ties keep the earliest member.
Modulation ml_classify(const ComplexFrame& frame, const std::vector<Modulation>& pool,
                       double noise_power);

// Max over the amplitude x phase grid of the log likelihood with the
// hypothesis constellation a0 e^{-j theta0} A. Search order: amplitudes
// outer, phases inner; strict improvement keeps the earliest hypothesis.
double hlrt_max_log_likelihood(const ComplexFrame& frame, Modulation mod, double noise_power,
                               const HlrtGrid& grid);

Modulation hlrt_classify(const ComplexFrame& frame, const std::vector<Modulation>& pool,
                         double noise_power, const HlrtGrid& grid);

}  // namespace amc
