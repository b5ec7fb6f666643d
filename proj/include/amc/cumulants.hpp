#pragma once

#include <vector>

#include "amc/modem.hpp"

namespace amc {

// Magnitudes of the scale-normalized higher-order cumulants.
struct CumulantFeatures {
  double c40 = 0.0;
  double c42 = 0.0;
  double c63 = 0.0;
};

// Sample estimate from moments M_pq = mean(y^{p-q} conj(y)^q):
//   C40 = M40 - 3 M20^2
//   C42 = M42 - |M20|^2 - 2 M21^2
//   C63 = M63 - 6 M20 M41 - 9 M21 M42 + 18 M20^2 M21 + 12 M21^3
// normalized by C21 = M21 (C4x by C21^2, C63 by C21^3).
// Throws on a zero-power frame.
CumulantFeatures cumulant_features(const ComplexFrame& frame);

// Exact noiseless features of an alphabet, by direct expectation over its
// equiprobable points.
CumulantFeatures theoretical_cumulants(Modulation m);

// Nearest theoretical feature vector in Euclidean distance; ties break by
// pool order.
Modulation cumulant_classify(const ComplexFrame& frame, const std::vector<Modulation>& pool);

}  // namespace amc
