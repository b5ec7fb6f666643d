#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "amc/common.hpp"

namespace amc {

enum class Modulation { Qpsk, Psk8, Qam16, Qam64 };

// Fixed classifier pool order; also the tie-break order everywhere.
inline constexpr Modulation kDefaultPool[] = {Modulation::Qpsk, Modulation::Psk8,
                                              Modulation::Qam16, Modulation::Qam64};

std::string mod_name(Modulation m);
Modulation mod_from_name(const std::string& name);  // throws on unknown name
int alphabet_size(Modulation m);

// Unit-average-power constellation. Point order is fixed:
// PSK: e^{j(2k+1)pi/M'} counter-clockwise from the first quadrant
// (QPSK starts at (1+j)/sqrt(2), 8PSK at e^{j0}); QAM: row-major over the
// I/Q level grid from (-L,-L) to (+L,+L).
const std::vector<cplx>& alphabet(Modulation m);

// Flat-fading parameters: y[n] = a e^{j(2 pi f0 n + theta)} s[n] + g[n].
struct ChannelParams {
  double a = 1.0;        // amplitude factor, > 0
  double theta = 0.0;    // phase offset, radians
  double f0 = 0.0;       // frequency offset, cycles/sample
  double snr_db = kNoiselessSnrDb;
  double delta = 0.0;    // time variation degree, >= 0
};

struct ComplexFrame {
  std::vector<cplx> samples;
  std::optional<Modulation> label;
  std::optional<ChannelParams> channel;
  std::uint64_t seed = 0;

  std::size_t size() const { return samples.size(); }
};

// n i.i.d. uniform draws from the alphabet; identical seed, identical frame.
ComplexFrame generate_frame(Modulation m, std::size_t n, std::uint64_t seed);

// N0 under SNR = Es/N0 with Es = 1 (unit-power alphabets). The complex noise
// has total variance N0, split evenly between I and Q. Infinite snr_db maps
// to N0 = 0.
double snr_to_noise_power(double snr_db);

// Per-sample application of the channel model above; deterministic per seed.
ComplexFrame apply_channel(const ComplexFrame& frame, const ChannelParams& ch,
                           std::uint64_t seed);

// Time-varying drift: a' = a(1 +- delta), theta' = theta(1 +- delta) with
// independent random signs; f0 and snr kept.
ChannelParams evolve_channel(const ChannelParams& ch, std::uint64_t seed);

// Table II draw: a ~ U(0.2, 1), theta ~ U(0, 2pi), f0 = 0.
ChannelParams draw_fading_channel(double snr_db, std::uint64_t seed);

}  // namespace amc
