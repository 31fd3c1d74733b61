// Copy-merge strategy: runs stay in the input; each merge copies the shorter
// run into an auxiliary buffer of ceil(n/2) elements and merges back.

#pragma once

#include <cassert>
#include <span>
#include <stdexcept>
#include <vector>

#include "powersort/engine.hpp"

namespace powersort {

/// Merges data[i, j) and data[j, k) in place using `aux` for the shorter run.
/// Left-to-right when the left run is shorter (or equal), right-to-left
/// otherwise. Ties go to the left run.
template <typename T, typename Compare>
void merge_copy_smaller(std::span<T> data, std::size_t i, std::size_t j, std::size_t k,
                        std::span<T> aux, SortContext<Compare>& ctx) {
  const std::size_t len_a = j - i;
  const std::size_t len_b = k - j;
  if (std::min(len_a, len_b) > aux.size()) {
    throw std::length_error("merge_copy_smaller: auxiliary buffer too small");
  }
  if (len_a <= len_b) {
    for (std::size_t t = 0; t < len_a; ++t) ctx.move(aux[t], data[i + t]);
    std::size_t xa = 0;
    std::size_t xb = j;
    std::size_t out = i;
    while (xa < len_a && xb < k) {
      if (ctx.less(data[xb], aux[xa])) {
        ctx.move(data[out++], data[xb++]);
      } else {
        ctx.move(data[out++], aux[xa++]);
      }
    }
    while (xa < len_a) ctx.move(data[out++], aux[xa++]);
  } else {
    for (std::size_t t = 0; t < len_b; ++t) ctx.move(aux[t], data[j + t]);
    // Scan both runs from the back; on equality the right-run element lands later.
    std::size_t xa = j;
    std::size_t xb = len_b;
    std::size_t out = k;
    while (xa > i && xb > 0) {
      if (ctx.less(aux[xb - 1], data[xa - 1])) {
        ctx.move(data[--out], data[--xa]);
      } else {
        ctx.move(data[--out], aux[--xb]);
      }
    }
    while (xb > 0) ctx.move(data[--out], aux[--xb]);
  }
  ctx.record_merge(len_a, len_b);
}

template <typename T, typename Compare>
class CPythonStrategy {
 public:
  struct Run {
    std::size_t lo = 0;
    std::size_t hi = 0;
  };

  CPythonStrategy(std::span<T> data, SortContext<Compare>& ctx)
      : data_(data), ctx_(ctx), aux_((data.size() + 1) / 2) {
    ctx_.note_extra_words(aux_.size() * payload_words_v<T>);
  }

  std::size_t size() const { return data_.size(); }
  bool work_empty() const { return pos_ == data_.size(); }
  SortContext<Compare>& context() { return ctx_; }

  Run extract_run(std::size_t min_len) {
    Run r{pos_, powersort::extract_run(data_, pos_, min_len, ctx_)};
    pos_ = r.hi;
    return r;
  }

  Run merge(Run top, Run curr, MergeRole) {
    assert(top.hi == curr.lo);
    merge_copy_smaller(data_, top.lo, top.hi, curr.hi, std::span<T>(aux_), ctx_);
    return {top.lo, curr.hi};
  }

  Run push(Run r) { return r; }
  void finish(Run) {}

 private:
  std::span<T> data_;
  SortContext<Compare>& ctx_;
  std::vector<T> aux_;
  std::size_t pos_ = 0;
};

}  // namespace powersort
