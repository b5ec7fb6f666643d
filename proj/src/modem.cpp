#include "amc/modem.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace amc {

namespace {

std::vector<cplx> make_psk(int m, double phase0) {
  std::vector<cplx> pts(m);
  for (int k = 0; k < m; ++k) {
    double ang = phase0 + 2.0 * std::numbers::pi * k / m;
    pts[k] = cplx(std::cos(ang), std::sin(ang));
  }
  return pts;
}

std::vector<cplx> make_qam(int levels_per_axis) {
  std::vector<cplx> pts;
  pts.reserve(levels_per_axis * levels_per_axis);
  double power = 0.0;
  for (int qi = 0; qi < levels_per_axis; ++qi) {
    for (int ii = 0; ii < levels_per_axis; ++ii) {
      double i_level = 2.0 * ii - (levels_per_axis - 1);
      double q_level = 2.0 * qi - (levels_per_axis - 1);
      pts.emplace_back(i_level, q_level);
      power += i_level * i_level + q_level * q_level;
    }
  }
  double scale = std::sqrt(pts.size() / power);
  for (auto& p : pts) p *= scale;
  return pts;
}

}  // namespace

std::string mod_name(Modulation m) {
  switch (m) {
    case Modulation::Qpsk: return "qpsk";
    case Modulation::Psk8: return "8psk";
    case Modulation::Qam16: return "16qam";
    case Modulation::Qam64: return "64qam";
  }
  throw std::logic_error("bad modulation enum");
}

Modulation mod_from_name(const std::string& name) {
  if (name == "qpsk") return Modulation::Qpsk;
  if (name == "8psk") return Modulation::Psk8;
  if (name == "16qam") return Modulation::Qam16;
  if (name == "64qam") return Modulation::Qam64;
  throw std::invalid_argument("unknown modulation: " + name);
}

int alphabet_size(Modulation m) {
  switch (m) {
    case Modulation::Qpsk: return 4;
    case Modulation::Psk8: return 8;
    case Modulation::Qam16: return 16;
    case Modulation::Qam64: return 64;
  }
  throw std::logic_error("bad modulation enum");
}

const std::vector<cplx>& alphabet(Modulation m) {
  static const std::vector<cplx> qpsk = make_psk(4, std::numbers::pi / 4);
  static const std::vector<cplx> psk8 = make_psk(8, 0.0);
  static const std::vector<cplx> qam16 = make_qam(4);
  static const std::vector<cplx> qam64 = make_qam(8);
  switch (m) {
    case Modulation::Qpsk: return qpsk;
    case Modulation::Psk8: return psk8;
    case Modulation::Qam16: return qam16;
    case Modulation::Qam64: return qam64;
  }
  throw std::logic_error("bad modulation enum");
}

ComplexFrame generate_frame(Modulation m, std::size_t n, std::uint64_t seed) {
  const auto& alpha = alphabet(m);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, alpha.size() - 1);
  ComplexFrame f;
  f.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) f.samples[i] = alpha[pick(rng)];
  f.label = m;
  f.seed = seed;
  return f;
}

double snr_to_noise_power(double snr_db) {
  if (std::isinf(snr_db) && snr_db > 0) return 0.0;
  return std::pow(10.0, -snr_db / 10.0);
}

ComplexFrame apply_channel(const ComplexFrame& frame, const ChannelParams& ch,
                           std::uint64_t seed) {
  ComplexFrame out = frame;
  out.channel = ch;
  const double n0 = snr_to_noise_power(ch.snr_db);
  const double sigma = std::sqrt(n0 / 2.0);  // per-component std dev
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (std::size_t n = 0; n < out.samples.size(); ++n) {
    double ang = 2.0 * std::numbers::pi * ch.f0 * static_cast<double>(n) + ch.theta;
    cplx rot(std::cos(ang), std::sin(ang));
    cplx y = ch.a * rot * out.samples[n];
    if (sigma > 0.0) y += cplx(sigma * gauss(rng), sigma * gauss(rng));
    out.samples[n] = y;
  }
  return out;
}

ChannelParams evolve_channel(const ChannelParams& ch, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> coin(0, 1);
  ChannelParams out = ch;
  out.a = ch.a * (coin(rng) ? 1.0 + ch.delta : 1.0 - ch.delta);
  out.theta = ch.theta * (coin(rng) ? 1.0 + ch.delta : 1.0 - ch.delta);
  return out;
}

ChannelParams draw_fading_channel(double snr_db, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ua(0.2, 1.0);
  std::uniform_real_distribution<double> ut(0.0, 2.0 * std::numbers::pi);
  ChannelParams ch;
  ch.a = ua(rng);
  ch.theta = ut(rng);
  ch.f0 = 0.0;
  ch.snr_db = snr_db;
  return ch;
}

}  // namespace amc
