#include "amc/common.hpp"

#include <cstdlib>
#include <thread>

namespace amc {

unsigned worker_threads() {
  if (const char* env = std::getenv("AMC_THREADS")) {
    int n = std::atoi(env);
    if (n > 0) return static_cast<unsigned>(n);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
  unsigned t = worker_threads();
  if (t <= 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  if (t > count) t = static_cast<unsigned>(count);
  std::vector<std::thread> pool;
  pool.reserve(t);
  for (unsigned k = 0; k < t; ++k) {
    std::size_t lo = count * k / t;
    std::size_t hi = count * (k + 1) / t;
    pool.emplace_back([lo, hi, &fn] {
      for (std::size_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace amc
