// Generic Powersort driver over a buffer strategy.

#pragma once

#include <cassert>
#include <concepts>
#include <cstddef>
#include <span>
#include <vector>

#include "powersort/core.hpp"

namespace powersort {

/// Offsets of two adjacent runs a = [i, j) and b = [j, k) inside [0, n).
struct RunBoundary {
  std::size_t i = 0;
  std::size_t j = 0;
  std::size_t k = 0;
};

/// Smallest p >= 1 such that some integer c has
/// (i + j) / 2n < c / 2^p <= (j + k) / 2n. Requires i < j < k <= n.
unsigned node_power(std::size_t n, std::size_t i, std::size_t j, std::size_t k);

inline unsigned node_power(std::size_t n, const RunBoundary& b) {
  return node_power(n, b.i, b.j, b.k);
}

/// Start from n and halve with rounding up until the value drops below 64.
std::size_t min_run_length(std::size_t n);

/// Finds the maximal non-decreasing prefix of data[pos, end) and, if it is
/// shorter than min_len, extends it with a stable binary insertion sort to
/// min(min_len, end - pos) elements. Returns the end of the run.
template <typename T, typename Compare>
std::size_t extract_run(std::span<T> data, std::size_t pos, std::size_t min_len,
                        SortContext<Compare>& ctx) {
  const std::size_t end = data.size();
  assert(pos < end);
  std::size_t hi = pos + 1;
  while (hi < end && !ctx.less(data[hi], data[hi - 1])) ++hi;

  const std::size_t target = std::min(end, pos + std::max<std::size_t>(min_len, 1));
  for (; hi < target; ++hi) {
    // Upper bound keeps equal keys in input order.
    std::size_t lo = pos;
    std::size_t up = hi;
    while (lo < up) {
      std::size_t mid = lo + (up - lo) / 2;
      if (ctx.less(data[hi], data[mid])) {
        up = mid;
      } else {
        lo = mid + 1;
      }
    }
    if (lo == hi) continue;
    T pivot = ctx.take(data[hi]);
    for (std::size_t m = hi; m > lo; --m) ctx.move(data[m], data[m - 1]);
    ctx.move(data[lo], pivot);
  }
  return hi;
}

/// Where a merge sits in the collapse choreography. Strategies may use it to
/// pick the output location.
enum class MergeRole {
  kCollapse,      // a merge in the collapse loop followed by another pop
  kCollapseLast,  // the last pop of a collapse loop; the result is pushed next
  kUnwind,        // the final unwinding once the input is exhausted
};

template <typename S>
concept BufferStrategy = requires(S& s, const S& cs, typename S::Run r, std::size_t len,
                                  MergeRole role) {
  typename S::Run;
  { cs.size() } -> std::convertible_to<std::size_t>;
  { s.extract_run(len) } -> std::same_as<typename S::Run>;
  { cs.work_empty() } -> std::convertible_to<bool>;
  { s.merge(r, r, role) } -> std::same_as<typename S::Run>;
  { s.push(r) } -> std::same_as<typename S::Run>;
  { s.finish(r) };
  { s.context() };
};

struct SortOptions {
  /// 0 selects min_run_length(n).
  std::size_t min_run = 0;
  /// When set, receives the lengths of the runs the sort actually merged.
  std::vector<std::size_t>* run_lengths = nullptr;
};

/// Abstract Powersort: repeatedly extract a run, compute the power of the
/// boundary with its predecessor, and merge while the stack top has a power
/// at least as large.
template <BufferStrategy Strategy>
void run_powersort(Strategy& strategy, const SortOptions& options = {}) {
  const std::size_t n = strategy.size();
  if (n <= 1) return;
  const std::size_t min_len = options.min_run ? options.min_run : min_run_length(n);
  auto& ctx = strategy.context();

  struct Entry {
    typename Strategy::Run run;
    unsigned power;
  };
  std::vector<Entry> stack;
  stack.reserve(80);

  auto extract = [&] {
    const std::uint64_t comps = ctx.stats().comparisons;
    const std::uint64_t moves = ctx.stats().moves;
    auto run = strategy.extract_run(min_len);
    ctx.stats().run_formation_comparisons += ctx.stats().comparisons - comps;
    ctx.stats().run_formation_moves += ctx.stats().moves - moves;
    if (options.run_lengths) options.run_lengths->push_back(run.hi - run.lo);
    return run;
  };

  auto curr = extract();
  while (!strategy.work_empty()) {
    auto next = extract();
    const unsigned p = node_power(n, curr.lo, curr.hi, next.hi);
    while (!stack.empty() && stack.back().power >= p) {
      const bool last = stack.size() == 1 || stack[stack.size() - 2].power < p;
      curr = strategy.merge(stack.back().run, curr,
                            last ? MergeRole::kCollapseLast : MergeRole::kCollapse);
      stack.pop_back();
    }
    assert(stack.empty() || stack.back().power < p);
    stack.push_back({strategy.push(curr), p});
    ctx.note_stack_height(stack.size());
    curr = next;
  }
  while (!stack.empty()) {
    curr = strategy.merge(stack.back().run, curr, MergeRole::kUnwind);
    stack.pop_back();
  }
  strategy.finish(curr);
}

}  // namespace powersort
