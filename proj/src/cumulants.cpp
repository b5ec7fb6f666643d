#include "amc/cumulants.hpp"

#include <cmath>
#include <stdexcept>

namespace amc {

namespace {

struct Moments {
  cplx m20, m21, m40, m41, m42, m63;
};

Moments moments_of(const std::vector<cplx>& ys) {
  Moments m{};
  for (const cplx& y : ys) {
    cplx yc = std::conj(y);
    cplx y2 = y * y;
    double p = std::norm(y);  // y * conj(y), real
    m.m20 += y2;
    m.m21 += p;
    m.m40 += y2 * y2;
    m.m41 += y2 * y * yc;
    m.m42 += p * p;  // y^2 conj(y)^2
    m.m63 += p * p * p;
  }
  double inv = 1.0 / static_cast<double>(ys.size());
  m.m20 *= inv;
  m.m21 *= inv;
  m.m40 *= inv;
  m.m41 *= inv;
  m.m42 *= inv;
  m.m63 *= inv;
  return m;
}

CumulantFeatures features_from_moments(const Moments& m) {
  cplx c40 = m.m40 - 3.0 * m.m20 * m.m20;
  cplx c42 = m.m42 - std::norm(m.m20) - 2.0 * m.m21 * m.m21;
  cplx c63 = m.m63 - 6.0 * m.m20 * m.m41 - 9.0 * m.m21 * m.m42 +
             18.0 * m.m20 * m.m20 * m.m21 + 12.0 * m.m21 * m.m21 * m.m21;
  double c21 = m.m21.real();
  CumulantFeatures f;
  f.c40 = std::abs(c40) / (c21 * c21);
  f.c42 = std::abs(c42) / (c21 * c21);
  f.c63 = std::abs(c63) / (c21 * c21 * c21);
  return f;
}

}  // namespace

CumulantFeatures cumulant_features(const ComplexFrame& frame) {
  if (frame.samples.size() < 2)
    throw std::invalid_argument("cumulant_features: frame too short");
  Moments m = moments_of(frame.samples);
  if (m.m21.real() <= 0.0) throw std::invalid_argument("zero-power frame");
  return features_from_moments(m);
}

CumulantFeatures theoretical_cumulants(Modulation m) {
  return features_from_moments(moments_of(alphabet(m)));
}

Modulation cumulant_classify(const ComplexFrame& frame, const std::vector<Modulation>& pool) {
  if (pool.empty()) throw std::invalid_argument("cumulant_classify: empty pool");
  CumulantFeatures est = cumulant_features(frame);
  Modulation best = pool.front();
  double best_d = std::numeric_limits<double>::infinity();
  for (Modulation m : pool) {
    CumulantFeatures t = theoretical_cumulants(m);
    double d = (est.c40 - t.c40) * (est.c40 - t.c40) + (est.c42 - t.c42) * (est.c42 - t.c42) +
               (est.c63 - t.c63) * (est.c63 - t.c63);
    if (d < best_d) {
      best_d = d;
      best = m;
    }
  }
  return best;
}

}  // namespace amc
