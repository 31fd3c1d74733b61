// Pingpong strategy: runs on the stack live in a full-size side array at the
// same offsets they occupy in the input; curr, next and work stay in the input.
// Every merge reads (stack run, input run) and writes the other array, so no
// element is copied twice on its way through a merge.

#pragma once

#include <cassert>
#include <span>
#include <vector>

#include "powersort/engine.hpp"

namespace powersort {

enum class Residence { kInput, kStackBuf };

/// Copies input[lo, hi) to stack_buf[lo, hi).
template <typename T, typename Compare>
void push_with_copy(std::span<T> input, std::span<T> stack_buf, std::size_t lo, std::size_t hi,
                    SortContext<Compare>& ctx) {
  for (std::size_t t = lo; t < hi; ++t) ctx.move(stack_buf[t], input[t]);
}

/// Merges stack_buf[i, j) with input[j, k) left to right into input[i, k).
/// Once the stack run is exhausted the rest of input[j, k) is already in place.
template <typename T, typename Compare>
void merge_stack_with_curr(std::span<T> input, std::span<T> stack_buf, std::size_t i,
                           std::size_t j, std::size_t k, SortContext<Compare>& ctx) {
  std::size_t xa = i;
  std::size_t xb = j;
  std::size_t out = i;
  while (xa < j && xb < k) {
    if (ctx.less(input[xb], stack_buf[xa])) {
      ctx.move(input[out++], input[xb++]);
    } else {
      ctx.move(input[out++], stack_buf[xa++]);
    }
  }
  while (xa < j) ctx.move(input[out++], stack_buf[xa++]);
  ctx.record_merge(j - i, k - j);
}

/// Merges stack_buf[i, j) with input[j, k) right to left into stack_buf[i, k).
/// Once input[j, k) is exhausted the rest of the stack run is already in place.
template <typename T, typename Compare>
void merge_last_pop_into_stackbuf(std::span<T> input, std::span<T> stack_buf, std::size_t i,
                                  std::size_t j, std::size_t k, SortContext<Compare>& ctx) {
  std::size_t xa = j;
  std::size_t xb = k;
  std::size_t out = k;
  while (xa > i && xb > j) {
    if (ctx.less(input[xb - 1], stack_buf[xa - 1])) {
      ctx.move(stack_buf[--out], stack_buf[--xa]);
    } else {
      ctx.move(stack_buf[--out], input[--xb]);
    }
  }
  while (xb > j) ctx.move(stack_buf[--out], input[--xb]);
  ctx.record_merge(j - i, k - j);
}

template <typename T, typename Compare>
class PingpongStrategy {
 public:
  struct Run {
    std::size_t lo = 0;
    std::size_t hi = 0;
    Residence where = Residence::kInput;
  };

  PingpongStrategy(std::span<T> data, SortContext<Compare>& ctx, bool last_pop_optimization = true)
      : data_(data), ctx_(ctx), stack_buf_(data.size()), last_pop_(last_pop_optimization) {
    ctx_.note_extra_words(stack_buf_.size() * payload_words_v<T>);
  }

  std::size_t size() const { return data_.size(); }
  bool work_empty() const { return pos_ == data_.size(); }
  SortContext<Compare>& context() { return ctx_; }

  Run extract_run(std::size_t min_len) {
    Run r{pos_, powersort::extract_run(data_, pos_, min_len, ctx_), Residence::kInput};
    pos_ = r.hi;
    return r;
  }

  Run merge(Run top, Run curr, MergeRole role) {
    assert(top.where == Residence::kStackBuf && curr.where == Residence::kInput);
    assert(top.hi == curr.lo);
    if (last_pop_ && role == MergeRole::kCollapseLast) {
      merge_last_pop_into_stackbuf(data_, std::span<T>(stack_buf_), top.lo, top.hi, curr.hi, ctx_);
      return {top.lo, curr.hi, Residence::kStackBuf};
    }
    merge_stack_with_curr(data_, std::span<T>(stack_buf_), top.lo, top.hi, curr.hi, ctx_);
    return {top.lo, curr.hi, Residence::kInput};
  }

  Run push(Run r) {
    if (r.where == Residence::kInput) {
      push_with_copy(data_, std::span<T>(stack_buf_), r.lo, r.hi, ctx_);
      r.where = Residence::kStackBuf;
    }
    return r;
  }

  // Unwinding merges always write the input, so the result is already home.
  void finish(Run r) { assert(r.where == Residence::kInput); (void)r; }

 private:
  std::span<T> data_;
  SortContext<Compare>& ctx_;
  std::vector<T> stack_buf_;
  bool last_pop_;
  std::size_t pos_ = 0;
};

}  // namespace powersort
