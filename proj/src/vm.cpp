#include <cmath>

#include "powersort/strategy_vm.hpp"

namespace powersort::vm {

unsigned ceil_log2(std::size_t n) {
  unsigned c = 0;
  while ((std::size_t{1} << c) < n) ++c;
  return c;
}

std::size_t page_size(std::size_t n, std::size_t words_per_item) {
  if (words_per_item == 0) throw std::invalid_argument("page_size: T must be positive");
  if (n <= 1) return 1;
  const double target =
      std::sqrt(static_cast<double>(n) / (static_cast<double>(words_per_item) * std::log2(n)));
  std::size_t p = 1;
  while (static_cast<double>(p * 2) <= target) p *= 2;
  p = std::max<std::size_t>(p, 16);
  while (p > n) p /= 2;
  return p;
}

std::size_t reserve_pages(std::size_t n) { return ceil_log2(n) + 4; }

std::uint64_t preallocated_words(std::size_t n, std::size_t words_per_item, std::size_t page) {
  const std::size_t r = reserve_pages(n);
  const std::size_t k = (n + page - 1) / page;
  return static_cast<std::uint64_t>(r) * page * words_per_item + k + r;
}

}  // namespace powersort::vm
