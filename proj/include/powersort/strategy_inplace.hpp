// Bufferless baseline: merges by recursive rotation (divide and conquer), as
// in libstdc++'s __merge_without_buffer. O(log n) words, O(m log m) moves per
// merge of m elements.

#pragma once

#include <algorithm>
#include <cassert>
#include <span>

#include "powersort/engine.hpp"

namespace powersort {

/// Reverses data[lo, hi) with counted swaps.
template <typename T, typename Compare>
void reverse_range(std::span<T> data, std::size_t lo, std::size_t hi, SortContext<Compare>& ctx) {
  while (hi - lo > 1) {
    --hi;
    ctx.swap(data[lo], data[hi]);
    ++lo;
  }
}

/// Rotates data[first, last) so that data[middle] becomes data[first].
/// Returns the new position of the old data[first].
template <typename T, typename Compare>
std::size_t rotate_range(std::span<T> data, std::size_t first, std::size_t middle,
                         std::size_t last, SortContext<Compare>& ctx) {
  if (first == middle) return last;
  if (middle == last) return first;
  reverse_range(data, first, middle, ctx);
  reverse_range(data, middle, last, ctx);
  reverse_range(data, first, last, ctx);
  return first + (last - middle);
}

namespace detail {

template <typename T, typename Compare>
std::size_t lower_bound(std::span<T> data, std::size_t lo, std::size_t hi, const T& value,
                        SortContext<Compare>& ctx) {
  while (lo < hi) {
    std::size_t mid = lo + (hi - lo) / 2;
    if (ctx.less(data[mid], value)) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  return lo;
}

template <typename T, typename Compare>
std::size_t upper_bound(std::span<T> data, std::size_t lo, std::size_t hi, const T& value,
                        SortContext<Compare>& ctx) {
  while (lo < hi) {
    std::size_t mid = lo + (hi - lo) / 2;
    if (ctx.less(value, data[mid])) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return lo;
}

template <typename T, typename Compare>
void merge_without_buffer(std::span<T> data, std::size_t first, std::size_t middle,
                          std::size_t last, SortContext<Compare>& ctx, std::size_t depth,
                          std::size_t* max_depth) {
  if (max_depth) *max_depth = std::max(*max_depth, depth);
  // Recurse into the shorter half and loop on the longer one so the frame
  // count stays logarithmic.
  for (;;) {
    const std::size_t len1 = middle - first;
    const std::size_t len2 = last - middle;
    if (len1 == 0 || len2 == 0) return;
    if (len1 + len2 == 2) {
      if (ctx.less(data[middle], data[first])) ctx.swap(data[first], data[middle]);
      return;
    }
    std::size_t first_cut;
    std::size_t second_cut;
    if (len1 > len2) {
      first_cut = first + len1 / 2;
      second_cut = lower_bound(data, middle, last, data[first_cut], ctx);
    } else {
      second_cut = middle + len2 / 2;
      first_cut = upper_bound(data, first, middle, data[second_cut], ctx);
    }
    const std::size_t new_middle = rotate_range(data, first_cut, middle, second_cut, ctx);
    if (new_middle - first <= last - new_middle) {
      merge_without_buffer(data, first, first_cut, new_middle, ctx, depth + 1, max_depth);
      first = new_middle;
      middle = second_cut;
    } else {
      merge_without_buffer(data, new_middle, second_cut, last, ctx, depth + 1, max_depth);
      last = new_middle;
      middle = first_cut;
    }
  }
}

}  // namespace detail

/// Stably merges data[i, j) and data[j, k) without an element buffer.
/// `max_depth`, when given, receives the deepest recursion level reached.
template <typename T, typename Compare>
void merge_without_buffer(std::span<T> data, std::size_t i, std::size_t j, std::size_t k,
                          SortContext<Compare>& ctx, std::size_t* max_depth = nullptr) {
  detail::merge_without_buffer(data, i, j, k, ctx, 1, max_depth);
}

template <typename T, typename Compare>
class InplaceStrategy {
 public:
  struct Run {
    std::size_t lo = 0;
    std::size_t hi = 0;
  };

  InplaceStrategy(std::span<T> data, SortContext<Compare>& ctx) : data_(data), ctx_(ctx) {}

  std::size_t size() const { return data_.size(); }
  bool work_empty() const { return pos_ == data_.size(); }
  SortContext<Compare>& context() { return ctx_; }
  std::size_t max_recursion_depth() const { return max_depth_; }

  Run extract_run(std::size_t min_len) {
    Run r{pos_, powersort::extract_run(data_, pos_, min_len, ctx_)};
    pos_ = r.hi;
    return r;
  }

  Run merge(Run top, Run curr, MergeRole) {
    assert(top.hi == curr.lo);
    merge_without_buffer(data_, top.lo, top.hi, curr.hi, ctx_, &max_depth_);
    ctx_.record_merge(top.hi - top.lo, curr.hi - curr.lo);
    return {top.lo, curr.hi};
  }

  Run push(Run r) { return r; }
  void finish(Run) {}

 private:
  std::span<T> data_;
  SortContext<Compare>& ctx_;
  std::size_t pos_ = 0;
  std::size_t max_depth_ = 0;
};

}  // namespace powersort
