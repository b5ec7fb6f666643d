#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "amc/grid.hpp"
#include "amc/likelihood.hpp"
#include "amc/modem.hpp"

namespace amc {

// Closed-form per-frame operation counts for one classifier, plus the
// symbolic parameters they were evaluated with.
struct OpCountReport {
  std::string classifier;
  std::uint64_t additions = 0;
  std::uint64_t multiplications = 0;
  std::uint64_t exponentials = 0;
  std::uint64_t logarithms = 0;
  std::uint64_t comparisons = 0;
  std::uint64_t memory_words = 0;
  // parameters
  std::uint64_t n = 0;          // symbol length
  std::uint64_t m = 0;          // pool size
  std::uint64_t sum_mi = 0;     // sum of alphabet sizes over the pool
  std::uint64_t n_a = 0;        // HLRT amplitude hypotheses (0 when unused)
  std::uint64_t n_theta = 0;    // HLRT phase hypotheses (0 when unused)
  std::uint64_t p_r = 0, p_theta = 0;  // image resolution (0 when unused)
};

// Supported classifier names: "ml", "cumulant", "iq", "accu_polar", "hlrt",
// "accu_polar_nnce". Throws on anything else, or when a required grid is
// missing.
OpCountReport count_ops(const std::string& classifier, std::uint64_t n,
                        const std::vector<Modulation>& pool,
                        const std::optional<HlrtGrid>& grid = std::nullopt,
                        const std::optional<GridConfig>& cfg = std::nullopt);

std::string op_count_csv_header();
std::string op_count_csv_row(const OpCountReport& r);

}  // namespace amc
