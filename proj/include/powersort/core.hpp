// Element contract, instrumentation counters and analytic accounting shared by
// every buffer strategy.

#pragma once

#include <algorithm>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace powersort {

/// Memory is accounted in 32-bit words.
inline constexpr std::size_t kWordBytes = sizeof(std::uint32_t);

/// Number of words occupied by one element of type T (rounded up).
template <typename T>
inline constexpr std::size_t payload_words_v = (sizeof(T) + kWordBytes - 1) / kWordBytes;

/// An element under sort. Comparisons look at `key` only; `origin` is the
/// element's index in the original input and exists for the stability oracle.
template <typename Key>
struct SortItem {
  Key key{};
  std::uint32_t origin = 0;
};

struct MergeStats {
  std::uint64_t comparisons = 0;
  // Every move/copy assignment and every move/copy construction of an element.
  std::uint64_t moves = 0;
  std::uint64_t merge_cost = 0;
  std::uint64_t peak_extra_words = 0;
  std::uint64_t max_stack_height = 0;
  // Share of comparisons and moves spent finding and boosting runs.
  std::uint64_t run_formation_comparisons = 0;
  std::uint64_t run_formation_moves = 0;
};

/// Adds one two-run merge to the merge cost. Throws on an empty run.
MergeStats record_merge(MergeStats stats, std::size_t len_a, std::size_t len_b);

struct RunDecomposition {
  std::vector<std::size_t> lengths;

  std::size_t total() const;
};

/// H = sum (l_i / n) lg(n / l_i), in bits.
double run_length_entropy(const RunDecomposition& d);

/// Lengths of the maximal non-decreasing runs of `keys` under `less`.
template <typename T, typename Less>
RunDecomposition natural_runs(std::span<const T> items, Less less) {
  RunDecomposition d;
  std::size_t start = 0;
  for (std::size_t i = 1; i <= items.size(); ++i) {
    if (i == items.size() || less(items[i], items[i - 1])) {
      d.lengths.push_back(i - start);
      start = i;
    }
  }
  return d;
}

/// Per-sort instrumentation. Strategies never compare or write elements
/// directly; everything goes through `less`, `move` and `swap` so the
/// counters are exact.
template <typename Compare>
class SortContext {
 public:
  explicit SortContext(Compare comp = Compare{}) : comp_(std::move(comp)) {}

  template <typename T>
  bool less(const T& a, const T& b) {
    ++stats_.comparisons;
    return comp_(a, b);
  }

  template <typename T>
  void move(T& dst, T& src) {
    ++stats_.moves;
    dst = std::move(src);
  }

  template <typename T>
  T take(T& src) {
    ++stats_.moves;
    return T(std::move(src));
  }

  // A swap through a temporary is one construction and two assignments.
  template <typename T>
  void swap(T& a, T& b) {
    stats_.moves += 3;
    T tmp(std::move(a));
    a = std::move(b);
    b = std::move(tmp);
  }

  void record_merge(std::size_t len_a, std::size_t len_b) {
    stats_ = powersort::record_merge(stats_, len_a, len_b);
  }

  void note_extra_words(std::uint64_t words) {
    stats_.peak_extra_words = std::max(stats_.peak_extra_words, words);
  }

  void note_stack_height(std::size_t h) {
    stats_.max_stack_height = std::max<std::uint64_t>(stats_.max_stack_height, h);
  }

  MergeStats& stats() { return stats_; }
  const MergeStats& stats() const { return stats_; }
  const Compare& comparator() const { return comp_; }

 private:
  Compare comp_;
  MergeStats stats_;
};

/// Orders SortItems by key with an arbitrary key comparator.
template <typename KeyLess = std::less<>>
struct ByKey {
  KeyLess key_less{};

  template <typename Key>
  bool operator()(const SortItem<Key>& a, const SortItem<Key>& b) const {
    return key_less(a.key, b.key);
  }
};

/// True iff `output` is sorted by key and key-equal neighbours keep their
/// original relative order.
template <typename Key, typename KeyLess = std::less<>>
bool stability_oracle(std::span<const SortItem<Key>> output, KeyLess key_less = {}) {
  for (std::size_t i = 1; i < output.size(); ++i) {
    const auto& prev = output[i - 1];
    const auto& cur = output[i];
    if (key_less(cur.key, prev.key)) return false;
    if (!key_less(prev.key, cur.key) && cur.origin <= prev.origin) return false;
  }
  return true;
}

}  // namespace powersort
