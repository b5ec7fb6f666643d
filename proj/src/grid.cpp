#include "amc/grid.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace amc {

void GridConfig::validate() const {
  if (!(r1 > r0) || !(theta1 > theta0)) throw std::invalid_argument("grid bounds reversed");
  if (p_r < 1 || p_theta < 1) throw std::invalid_argument("grid resolution must be >= 1");
  if (!(sigma > 0.0)) throw std::invalid_argument("grid sigma must be positive");
}

double GridImage::sum() const {
  double s = 0.0;
  for (double v : pixels) s += v;
  return s;
}

double GridImage::max() const {
  double m = 0.0;
  for (double v : pixels) m = std::max(m, v);
  return m;
}

PolarSamples to_polar(const ComplexFrame& frame) {
  PolarSamples p;
  p.r.resize(frame.samples.size());
  p.theta.resize(frame.samples.size());
  for (std::size_t n = 0; n < frame.samples.size(); ++n) {
    double i = frame.samples[n].real();
    double q = frame.samples[n].imag();
    p.r[n] = std::hypot(i, q);
    if (i != 0.0)
      p.theta[n] = std::atan(q / i);
    else if (q != 0.0)
      p.theta[n] = std::copysign(std::numbers::pi / 2, q);
    else
      p.theta[n] = 0.0;
  }
  return p;
}

void to_polar_backward(const ComplexFrame& frame, const std::vector<double>& dr,
                       const std::vector<double>& dtheta, std::vector<double>& di,
                       std::vector<double>& dq) {
  di.assign(frame.samples.size(), 0.0);
  dq.assign(frame.samples.size(), 0.0);
  for (std::size_t n = 0; n < frame.samples.size(); ++n) {
    double i = frame.samples[n].real();
    double q = frame.samples[n].imag();
    double r2 = i * i + q * q;
    if (r2 == 0.0) continue;
    double r = std::sqrt(r2);
    di[n] = dr[n] * (i / r) + dtheta[n] * (-q / r2);
    dq[n] = dr[n] * (q / r) + dtheta[n] * (i / r2);
  }
}

GridImage project_points(const std::vector<double>& xs, const std::vector<double>& ys,
                         const GridConfig& cfg, bool accumulate) {
  cfg.validate();
  GridImage img;
  img.config = cfg;
  img.kind = accumulate ? ImageKind::Accumulated : ImageKind::Binary;
  img.pixels.assign(cfg.p_r * cfg.p_theta, 0.0);
  const double dx = cfg.dr();
  const double dy = cfg.dtheta();
  for (std::size_t n = 0; n < xs.size(); ++n) {
    auto i = static_cast<long>(std::floor((xs[n] - cfg.r0) / dx));
    auto j = static_cast<long>(std::floor((ys[n] - cfg.theta0) / dy));
    i = std::clamp(i, 0L, static_cast<long>(cfg.p_r) - 1);
    j = std::clamp(j, 0L, static_cast<long>(cfg.p_theta) - 1);
    if (accumulate)
      img.at(i, j) += 1.0;
    else
      img.at(i, j) = 1.0;
  }
  return img;
}

GridImage project_hard(const PolarSamples& polar, const GridConfig& cfg, bool accumulate) {
  return project_points(polar.r, polar.theta, cfg, accumulate);
}

GridImage project_soft(const PolarSamples& polar, const GridConfig& cfg) {
  cfg.validate();
  GridImage img;
  img.config = cfg;
  img.kind = ImageKind::Soft;
  img.pixels.assign(cfg.p_r * cfg.p_theta, 0.0);
  const double dr = cfg.dr();
  const double dth = cfg.dtheta();
  const double inv2s2 = 1.0 / (2.0 * cfg.sigma * cfg.sigma);
  // The 2-D kernel separates into per-axis factors, so each symbol costs
  // p_r + p_theta exponentials instead of p_r * p_theta.
  std::vector<double> kr(cfg.p_r), kth(cfg.p_theta);
  for (std::size_t n = 0; n < polar.size(); ++n) {
    for (std::size_t i = 0; i < cfg.p_r; ++i) {
      double d = polar.r[n] - (cfg.r0 + dr * static_cast<double>(i));
      kr[i] = std::exp(-d * d * inv2s2);
    }
    for (std::size_t j = 0; j < cfg.p_theta; ++j) {
      double d = polar.theta[n] - (cfg.theta0 + dth * static_cast<double>(j));
      kth[j] = std::exp(-d * d * inv2s2);
    }
    for (std::size_t i = 0; i < cfg.p_r; ++i) {
      double* row = &img.pixels[i * cfg.p_theta];
      const double w = kr[i];
      for (std::size_t j = 0; j < cfg.p_theta; ++j) row[j] += w * kth[j];
    }
  }
  return img;
}

void project_soft_backward(const PolarSamples& polar, const GridConfig& cfg,
                           const std::vector<double>& dpixels, std::vector<double>& dr_out,
                           std::vector<double>& dtheta_out) {
  cfg.validate();
  if (dpixels.size() != cfg.p_r * cfg.p_theta)
    throw std::invalid_argument("project_soft_backward: gradient size mismatch");
  dr_out.assign(polar.size(), 0.0);
  dtheta_out.assign(polar.size(), 0.0);
  const double dr = cfg.dr();
  const double dth = cfg.dtheta();
  const double inv_s2 = 1.0 / (cfg.sigma * cfg.sigma);
  const double inv2s2 = 0.5 * inv_s2;
  std::vector<double> kr(cfg.p_r), gr(cfg.p_r), kth(cfg.p_theta), gth(cfg.p_theta);
  for (std::size_t n = 0; n < polar.size(); ++n) {
    for (std::size_t i = 0; i < cfg.p_r; ++i) {
      double d = polar.r[n] - (cfg.r0 + dr * static_cast<double>(i));
      kr[i] = std::exp(-d * d * inv2s2);
      gr[i] = -d * inv_s2;  // d(log k)/d r[n]
    }
    for (std::size_t j = 0; j < cfg.p_theta; ++j) {
      double d = polar.theta[n] - (cfg.theta0 + dth * static_cast<double>(j));
      kth[j] = std::exp(-d * d * inv2s2);
      gth[j] = -d * inv_s2;
    }
    double acc_r = 0.0, acc_th = 0.0;
    for (std::size_t i = 0; i < cfg.p_r; ++i) {
      const double* grad_row = &dpixels[i * cfg.p_theta];
      double row_plain = 0.0, row_gth = 0.0;
      for (std::size_t j = 0; j < cfg.p_theta; ++j) {
        double gk = grad_row[j] * kth[j];
        row_plain += gk;
        row_gth += gk * gth[j];
      }
      acc_r += kr[i] * gr[i] * row_plain;
      acc_th += kr[i] * row_gth;
    }
    dr_out[n] = acc_r;
    dtheta_out[n] = acc_th;
  }
}

void normalize_image(GridImage& img) {
  if (img.kind == ImageKind::Binary) return;
  double m = img.max();
  if (m <= 0.0) return;
  for (auto& v : img.pixels) v /= m;
}

void normalize_image_backward(const GridImage& raw, const std::vector<double>& dnorm,
                              std::vector<double>& draw) {
  draw.assign(raw.pixels.size(), 0.0);
  if (raw.kind == ImageKind::Binary) {
    draw = dnorm;
    return;
  }
  double m = 0.0;
  std::size_t arg = 0;
  for (std::size_t k = 0; k < raw.pixels.size(); ++k)
    if (raw.pixels[k] > m) {
      m = raw.pixels[k];
      arg = k;
    }
  if (m <= 0.0) {
    draw = dnorm;
    return;
  }
  double dot = 0.0;  // sum of dnorm * normalized pixel
  for (std::size_t k = 0; k < raw.pixels.size(); ++k) dot += dnorm[k] * raw.pixels[k] / m;
  for (std::size_t k = 0; k < raw.pixels.size(); ++k) draw[k] = dnorm[k] / m;
  draw[arg] = (dnorm[arg] - dot) / m;
}

void write_image_csv(const GridImage& img, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  for (std::size_t i = 0; i < img.config.p_r; ++i) {
    for (std::size_t j = 0; j < img.config.p_theta; ++j) {
      if (j) os << ',';
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%.9g", img.at(i, j));
      os << buf;
    }
    os << '\n';
  }
}

void write_image_pgm(const GridImage& img, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  double m = img.max();
  os << "P5\n" << img.config.p_theta << ' ' << img.config.p_r << "\n255\n";
  for (std::size_t i = 0; i < img.config.p_r; ++i)
    for (std::size_t j = 0; j < img.config.p_theta; ++j) {
      int v = m > 0.0 ? static_cast<int>(std::lround(img.at(i, j) / m * 255.0)) : 0;
      os.put(static_cast<char>(std::clamp(v, 0, 255)));
    }
}

}  // namespace amc
