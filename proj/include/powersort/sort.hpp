// Entry point: sort a span with one of the buffer strategies and collect the
// instrumentation.

#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "powersort/engine.hpp"
#include "powersort/strategy_cpython.hpp"
#include "powersort/strategy_inplace.hpp"
#include "powersort/strategy_pingpong.hpp"
#include "powersort/strategy_vm.hpp"

namespace powersort {

enum class Algorithm {
  kCPython,
  kPingpong,
  kPingpongUnopt,  // pingpong without the last-pop optimization
  kVm,
  kInplace,
};

inline constexpr Algorithm kAllAlgorithms[] = {Algorithm::kCPython, Algorithm::kPingpong,
                                               Algorithm::kPingpongUnopt, Algorithm::kVm,
                                               Algorithm::kInplace};

std::string_view algorithm_name(Algorithm algo);
std::optional<Algorithm> parse_algorithm(std::string_view name);

struct SortReport {
  MergeStats stats;
  // Runs after boosting, in input order. Empty for n == 0.
  RunDecomposition runs;
  vm::VmCounters vm;
  std::size_t vm_page_size = 0;
  std::size_t inplace_max_depth = 0;
};

struct SortConfig {
  SortOptions engine;
  vm::VmOptions vm;
};

template <typename T, typename Compare>
SortReport sort(std::span<T> data, Algorithm algo, Compare comp = Compare{},
                const SortConfig& config = {}) {
  SortContext<Compare> ctx(std::move(comp));
  SortReport report;
  SortOptions engine = config.engine;
  engine.run_lengths = &report.runs.lengths;
  switch (algo) {
    case Algorithm::kCPython: {
      CPythonStrategy<T, Compare> s(data, ctx);
      run_powersort(s, engine);
      break;
    }
    case Algorithm::kPingpong:
    case Algorithm::kPingpongUnopt: {
      PingpongStrategy<T, Compare> s(data, ctx, algo == Algorithm::kPingpong);
      run_powersort(s, engine);
      break;
    }
    case Algorithm::kVm: {
      if (data.empty()) break;
      vm::VmStrategy<T, Compare> s(data, ctx, config.vm);
      run_powersort(s, engine);
      report.vm = s.counters();
      report.vm_page_size = s.pool().page_capacity();
      break;
    }
    case Algorithm::kInplace: {
      InplaceStrategy<T, Compare> s(data, ctx);
      run_powersort(s, engine);
      report.inplace_max_depth = s.max_recursion_depth();
      break;
    }
  }
  // The engine skips run extraction for a single element.
  if (data.size() == 1) report.runs.lengths = {1};
  report.stats = ctx.stats();
  return report;
}

}  // namespace powersort
