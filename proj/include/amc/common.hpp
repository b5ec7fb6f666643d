#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

namespace amc {

using cplx = std::complex<double>;

// SNR sentinel selecting a noise-free channel.
constexpr double kNoiselessSnrDb = std::numeric_limits<double>::infinity();

// splitmix64 step; used to derive independent per-stream seeds from a base
// seed so that parallel cells never share RNG state.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  return splitmix64(base ^ splitmix64(stream + 1));
}

// Static block partition over [0, count); each index is processed exactly
// once and must only write to its own output slot, so results do not depend
// on the thread count.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

unsigned worker_threads();  // hardware concurrency, overridable via AMC_THREADS

}  // namespace amc
