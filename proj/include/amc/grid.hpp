#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "amc/modem.hpp"

namespace amc {

// Polar samples with the principal-value angle convention: theta in
// [-pi/2, pi/2], which folds the left half-plane onto the right.
struct PolarSamples {
  std::vector<double> r;
  std::vector<double> theta;

  std::size_t size() const { return r.size(); }
};

struct GridConfig {
  double r0 = 0.0, r1 = 3.0;
  double theta0 = -1.5707963267948966, theta1 = 1.5707963267948966;
  std::size_t p_r = 36, p_theta = 36;
  double sigma = (3.0 / 36) / 2;  // soft-projection kernel width

  double dr() const { return (r1 - r0) / static_cast<double>(p_r); }
  double dtheta() const { return (theta1 - theta0) / static_cast<double>(p_theta); }
  void validate() const;  // throws on inconsistent bounds/resolution
};

enum class ImageKind { Binary, Accumulated, Soft };

struct GridImage {
  std::vector<double> pixels;  // row-major, p_r rows x p_theta cols
  GridConfig config;
  ImageKind kind = ImageKind::Binary;

  double& at(std::size_t i, std::size_t j) { return pixels[i * config.p_theta + j]; }
  double at(std::size_t i, std::size_t j) const { return pixels[i * config.p_theta + j]; }
  double sum() const;
  double max() const;
};

// r = sqrt(I^2 + Q^2), theta = arctan(Q/I) with the I = 0 edge case mapped to
// sign(Q) * pi/2 and the origin to 0.
PolarSamples to_polar(const ComplexFrame& frame);

// Gradient of the polar transform: given dL/dr[n], dL/dtheta[n], accumulates
// dL/dI[n], dL/dQ[n]. The origin contributes zero gradient.
void to_polar_backward(const ComplexFrame& frame, const std::vector<double>& dr,
                       const std::vector<double>& dtheta, std::vector<double>& di,
                       std::vector<double>& dq);

// Generic hard binning of (x, y) points; x maps to the row (r) axis and y to
// the column (theta) axis. Out-of-range points clamp to the edge bins.
GridImage project_points(const std::vector<double>& xs, const std::vector<double>& ys,
                         const GridConfig& cfg, bool accumulate);

GridImage project_hard(const PolarSamples& polar, const GridConfig& cfg, bool accumulate);

// Differentiable projection: every pixel accumulates
// exp(-((r[n]-g_r[i])^2 + (theta[n]-g_theta[j])^2) / (2 sigma^2)), with grid
// values at bin left edges g_r[i] = r0 + dr*i.
GridImage project_soft(const PolarSamples& polar, const GridConfig& cfg);

// Backward pass of project_soft: given dL/dP, accumulates dL/dr[n] and
// dL/dtheta[n].
void project_soft_backward(const PolarSamples& polar, const GridConfig& cfg,
                           const std::vector<double>& dpixels, std::vector<double>& dr,
                           std::vector<double>& dtheta);

// CNN input scaling: accumulated and soft images divide by their max pixel,
// binary images pass through. No-op on all-zero images.
void normalize_image(GridImage& img);

// Backward of normalize_image for kinds that divide by the max pixel.
void normalize_image_backward(const GridImage& raw, const std::vector<double>& dnorm,
                              std::vector<double>& draw);

void write_image_csv(const GridImage& img, const std::string& path);
void write_image_pgm(const GridImage& img, const std::string& path);

}  // namespace amc
