#include "powersort/core.hpp"

#include <cmath>
#include <numeric>

namespace powersort {

MergeStats record_merge(MergeStats stats, std::size_t len_a, std::size_t len_b) {
  if (len_a == 0 || len_b == 0) {
    throw std::invalid_argument("record_merge: merging an empty run");
  }
  stats.merge_cost += len_a + len_b;
  return stats;
}

std::size_t RunDecomposition::total() const {
  return std::accumulate(lengths.begin(), lengths.end(), std::size_t{0});
}

double run_length_entropy(const RunDecomposition& d) {
  if (d.lengths.empty()) {
    throw std::invalid_argument("run_length_entropy: empty decomposition");
  }
  const double n = static_cast<double>(d.total());
  double h = 0.0;
  for (std::size_t len : d.lengths) {
    if (len == 0) throw std::invalid_argument("run_length_entropy: zero-length run");
    const double l = static_cast<double>(len);
    h += (l / n) * std::log2(n / l);
  }
  return h;
}

}  // namespace powersort
