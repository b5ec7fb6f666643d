#include "amc/likelihood.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace amc {

namespace {

void check_noise(double noise_power) {
  if (!(noise_power > 0.0))
    throw std::invalid_argument("noise_power must be positive for likelihood evaluation");
}

// Sum over symbols of log-sum-exp(-|y - A_k|^2 / n0), without the
// per-symbol normalizer.
double lse_sum(const std::vector<cplx>& ys, const std::vector<cplx>& points, double n0) {
  std::vector<double> d(points.size());
  double total = 0.0;
  for (const cplx& y : ys) {
    double dmin = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < points.size(); ++k) {
      d[k] = std::norm(y - points[k]);
      dmin = std::min(dmin, d[k]);
    }
    double acc = 0.0;
    for (double dk : d) acc += std::exp(-(dk - dmin) / n0);
    total += -dmin / n0 + std::log(acc);
  }
  return total;
}

}  // namespace

HlrtGrid HlrtGrid::paper_default() {
  HlrtGrid g;
  for (int i = 0; i <= 16; ++i) g.amplitudes.push_back(0.2 + 0.05 * i);
  for (int d = 0; d < 360; ++d) g.phases.push_back(d * std::numbers::pi / 180.0);
  return g;
}

HlrtGrid HlrtGrid::desk_default() {
  HlrtGrid g;
  for (int i = 0; i <= 8; ++i) g.amplitudes.push_back(0.2 + 0.1 * i);
  for (int d = 0; d < 360; d += 5) g.phases.push_back(d * std::numbers::pi / 180.0);
  return g;
}

double ml_log_likelihood(const ComplexFrame& frame, Modulation mod, double noise_power) {
  check_noise(noise_power);
  if (frame.samples.empty()) return 0.0;
  const auto& points = alphabet(mod);
  double ll = lse_sum(frame.samples, points, noise_power);
  double norm_per_symbol =
      -std::log(static_cast<double>(points.size())) - std::log(std::numbers::pi * noise_power);
  return ll + norm_per_symbol * static_cast<double>(frame.samples.size());
}

Modulation ml_classify(const ComplexFrame& frame, const std::vector<Modulation>& pool,
                       double noise_power) {
  if (pool.empty()) throw std::invalid_argument("ml_classify: empty pool");
  Modulation best = pool.front();
  double best_ll = -std::numeric_limits<double>::infinity();
  for (Modulation m : pool) {
    double ll = ml_log_likelihood(frame, m, noise_power);
    if (ll > best_ll) {
      best_ll = ll;
      best = m;
    }
  }
  return best;
}

double hlrt_max_log_likelihood(const ComplexFrame& frame, Modulation mod, double noise_power,
                               const HlrtGrid& grid) {
  check_noise(noise_power);
  if (grid.amplitudes.empty() || grid.phases.empty())
    throw std::invalid_argument("hlrt grid must be nonempty");
  if (frame.samples.empty()) return 0.0;
  const auto& points = alphabet(mod);
  // |y - a0 e^{-j t0} A| = |y e^{j t0} - a0 A|: rotate the frame once per
  // phase hypothesis and rescale the alphabet per amplitude hypothesis.
  std::vector<cplx> rotated(frame.samples.size());
  std::vector<cplx> scaled(points.size());
  double best = -std::numeric_limits<double>::infinity();
  for (double theta0 : grid.phases) {
    cplx rot(std::cos(theta0), std::sin(theta0));
    for (std::size_t n = 0; n < frame.samples.size(); ++n) rotated[n] = frame.samples[n] * rot;
    for (double a0 : grid.amplitudes) {
      for (std::size_t k = 0; k < points.size(); ++k) scaled[k] = a0 * points[k];
      best = std::max(best, lse_sum(rotated, scaled, noise_power));
    }
  }
  double norm_per_symbol =
      -std::log(static_cast<double>(points.size())) - std::log(std::numbers::pi * noise_power);
  return best + norm_per_symbol * static_cast<double>(frame.samples.size());
}

Modulation hlrt_classify(const ComplexFrame& frame, const std::vector<Modulation>& pool,
                         double noise_power, const HlrtGrid& grid) {
  if (pool.empty()) throw std::invalid_argument("hlrt_classify: empty pool");
  Modulation best = pool.front();
  double best_ll = -std::numeric_limits<double>::infinity();
  for (Modulation m : pool) {
    double ll = hlrt_max_log_likelihood(frame, m, noise_power, grid);
    if (ll > best_ll) {
      best_ll = ll;
      best = m;
    }
  }
  return best;
}

}  // namespace amc
