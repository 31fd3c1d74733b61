#include "powersort/engine.hpp"

#include <stdexcept>

namespace powersort {

unsigned node_power(std::size_t n, std::size_t i, std::size_t j, std::size_t k) {
  if (!(i < j && j < k && k <= n)) {
    throw std::invalid_argument("node_power: requires i < j < k <= n");
  }
  // Scaled midpoints: a / 2n and b / 2n are the two interval endpoints. Walk
  // their binary expansions until the first differing bit.
  std::uint64_t a = i + j;
  std::uint64_t b = j + k;
  const std::uint64_t two_n = 2 * static_cast<std::uint64_t>(n);
  unsigned p = 0;
  for (;;) {
    ++p;
    a <<= 1;
    b <<= 1;
    if (a >= two_n) {
      a -= two_n;
      b -= two_n;
    } else if (b >= two_n) {
      return p;
    }
  }
}

std::size_t min_run_length(std::size_t n) {
  if (n == 0) throw std::invalid_argument("min_run_length: n must be positive");
  std::size_t len = n;
  while (len >= 64) len = (len + 1) / 2;
  return len;
}

}  // namespace powersort
