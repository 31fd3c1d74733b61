#include "powersort/sort.hpp"

namespace powersort {

std::string_view algorithm_name(Algorithm algo) {
  switch (algo) {
    case Algorithm::kCPython: return "cpython";
    case Algorithm::kPingpong: return "pingpong";
    case Algorithm::kPingpongUnopt: return "pingpong-unopt";
    case Algorithm::kVm: return "vm";
    case Algorithm::kInplace: return "inplace";
  }
  return "?";
}

std::optional<Algorithm> parse_algorithm(std::string_view name) {
  for (Algorithm a : kAllAlgorithms) {
    if (algorithm_name(a) == name) return a;
  }
  return std::nullopt;
}

}  // namespace powersort
