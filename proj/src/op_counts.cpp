#include "amc/op_counts.hpp"

#include <sstream>
#include <stdexcept>

namespace amc {

OpCountReport count_ops(const std::string& classifier, std::uint64_t n,
                        const std::vector<Modulation>& pool,
                        const std::optional<HlrtGrid>& grid,
                        const std::optional<GridConfig>& cfg) {
  if (pool.empty()) throw std::invalid_argument("count_ops: empty pool");
  OpCountReport r;
  r.classifier = classifier;
  r.n = n;
  r.m = pool.size();
  for (Modulation m : pool) r.sum_mi += static_cast<std::uint64_t>(alphabet_size(m));
  const std::uint64_t M = r.m;
  const std::uint64_t S = r.sum_mi;

  if (classifier == "ml") {
    r.additions = n * (4 * S + M);
    r.multiplications = n * (7 * S + 4);
    r.exponentials = n * S;
    r.logarithms = n * M;
    r.comparisons = M;
    r.memory_words = S;
    return r;
  }
  if (classifier == "cumulant") {
    r.additions = 6 * n;
    r.multiplications = 16 * n;
    r.exponentials = 0;
    r.logarithms = 0;
    r.comparisons = M;
    r.memory_words = 3 * M;
    return r;
  }
  if (classifier == "hlrt") {
    if (!grid) throw std::invalid_argument("count_ops: hlrt needs a grid");
    r.n_a = grid->amplitudes.size();
    r.n_theta = grid->phases.size();
    const std::uint64_t H = r.n_a * r.n_theta;
    r.additions = H * n * (4 * S + M);
    r.multiplications = H * n * (9 * S);
    r.exponentials = 2 * H * n * S;
    r.logarithms = H * n * M;
    r.comparisons = H * M;
    r.memory_words = S;
    return r;
  }
  if (classifier == "iq" || classifier == "accu_polar" || classifier == "accu_polar_nnce") {
    if (!cfg) throw std::invalid_argument("count_ops: " + classifier + " needs a grid config");
    r.p_r = cfg->p_r;
    r.p_theta = cfg->p_theta;
    const std::uint64_t P = r.p_r * r.p_theta;
    if (classifier == "iq") {
      r.additions = 809 * P + M + 2 * n;
      r.multiplications = 809 * P + M + 3 * n;
      r.exponentials = M;
      r.logarithms = 0;
      r.comparisons = 116 * P + n;
      r.memory_words = 14020 + 17 * M;
    } else {
      r.additions = P * (4 * n + 107) + M;
      r.multiplications = P * (6 * n + 106) + M;
      r.exponentials = P * n + M;
      r.logarithms = 0;
      r.comparisons = 29 * P;
      r.memory_words = (classifier == "accu_polar_nnce" ? 1056 : 1012) + 5 * M;
    }
    return r;
  }
  throw std::invalid_argument("count_ops: unknown classifier " + classifier);
}

std::string op_count_csv_header() {
  return "classifier,n,m,sum_mi,n_a,n_theta,p_r,p_theta,additions,multiplications,"
         "exponentials,logarithms,comparisons,memory_words";
}

std::string op_count_csv_row(const OpCountReport& r) {
  std::ostringstream os;
  os << r.classifier << ',' << r.n << ',' << r.m << ',' << r.sum_mi << ',' << r.n_a << ','
     << r.n_theta << ',' << r.p_r << ',' << r.p_theta << ',' << r.additions << ','
     << r.multiplications << ',' << r.exponentials << ',' << r.logarithms << ',' << r.comparisons
     << ',' << r.memory_words;
  return os.str();
}

}  // namespace amc
