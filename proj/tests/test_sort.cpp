#include <gtest/gtest.h>

#include "powersort/sort.hpp"
#include "test_util.hpp"

using namespace powersort;
using namespace testutil;

namespace {

// Counts real constructions and assignments, to check that the moves counter
// sees every element write.
struct Counted {
  static inline std::uint64_t writes = 0;
  int key = 0;
  std::uint32_t origin = 0;

  Counted() = default;
  Counted(int k, std::uint32_t o) : key(k), origin(o) {}
  Counted(const Counted& o) : key(o.key), origin(o.origin) { ++writes; }
  Counted(Counted&& o) noexcept : key(o.key), origin(o.origin) { ++writes; }
  Counted& operator=(const Counted& o) {
    key = o.key;
    origin = o.origin;
    ++writes;
    return *this;
  }
  Counted& operator=(Counted&& o) noexcept {
    key = o.key;
    origin = o.origin;
    ++writes;
    return *this;
  }
};

struct CountedLess {
  bool operator()(const Counted& a, const Counted& b) const { return a.key < b.key; }
};

}  // namespace

TEST(Sort, AlgorithmNamesRoundTrip) {
  for (Algorithm a : kAllAlgorithms) EXPECT_EQ(parse_algorithm(algorithm_name(a)), a);
  EXPECT_FALSE(parse_algorithm("timsort"));
}

TEST(Sort, MovesCounterMatchesRealElementWrites) {
  std::mt19937_64 rng(21);
  for (Algorithm algo : kAllAlgorithms) {
    for (int t = 0; t < 30; ++t) {
      const std::size_t n = rng() % 3000;
      std::vector<Counted> v;
      for (std::size_t i = 0; i < n; ++i) v.emplace_back(static_cast<int>(rng() % 50), i);
      Counted::writes = 0;
      auto rep = sort(std::span<Counted>(v), algo, CountedLess{},
                      {.vm = {.page_capacity = algo == Algorithm::kVm && n >= 8 ? 8u : 0u}});
      EXPECT_EQ(rep.stats.moves, Counted::writes) << algorithm_name(algo) << " n=" << n;
      for (std::size_t i = 1; i < n; ++i) {
        ASSERT_FALSE(v[i].key < v[i - 1].key);
        if (v[i].key == v[i - 1].key) {
          ASSERT_GT(v[i].origin, v[i - 1].origin);
        }
      }
    }
  }
}

TEST(Sort, TwoRunExample) {
  for (Algorithm algo : kAllAlgorithms) {
    auto v = items({5, 6, 7, 8, 1, 2, 3, 4});
    auto rep = sort(std::span<Item>(v), algo, ByKey<>{}, {.engine = {.min_run = 1}});
    EXPECT_EQ(keys_of(v), (std::vector<int>{1, 2, 3, 4, 5, 6, 7, 8})) << algorithm_name(algo);
    EXPECT_EQ(rep.stats.merge_cost, 8u);
    EXPECT_EQ(rep.runs.lengths, (std::vector<std::size_t>{4, 4}));
  }
}

TEST(Sort, DegenerateSizes) {
  for (Algorithm algo : kAllAlgorithms) {
    std::vector<Item> none;
    auto r0 = sort(std::span<Item>(none), algo, ByKey<>{});
    EXPECT_EQ(r0.stats.moves, 0u);
    EXPECT_TRUE(r0.runs.lengths.empty());
    auto one = items({4});
    auto r1 = sort(std::span<Item>(one), algo, ByKey<>{});
    EXPECT_EQ(r1.stats.comparisons, 0u);
    EXPECT_EQ(r1.runs.lengths, (std::vector<std::size_t>{1}));
  }
}

TEST(Sort, SameMergesAcrossStrategies) {
  std::mt19937_64 rng(22);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 1 + rng() % 20000;
    auto v = random_items(n, 1 + rng() % 1000, rng);
    const auto want = reference_sort(v);
    std::uint64_t merge_cost = 0;
    bool first = true;
    for (Algorithm algo : kAllAlgorithms) {
      auto w = v;
      auto rep = sort(std::span<Item>(w), algo, ByKey<>{});
      ASSERT_TRUE(same_items(w, want)) << algorithm_name(algo);
      if (first) merge_cost = rep.stats.merge_cost;
      EXPECT_EQ(rep.stats.merge_cost, merge_cost);
      EXPECT_EQ(rep.runs.total(), n);
      first = false;
    }
  }
}

TEST(Sort, SortedInputHasNoMergeCost) {
  std::vector<Item> v(5000);
  for (int i = 0; i < 5000; ++i) v[i] = {i / 3, static_cast<std::uint32_t>(i)};
  for (Algorithm algo : kAllAlgorithms) {
    auto w = v;
    auto rep = sort(std::span<Item>(w), algo, ByKey<>{});
    EXPECT_EQ(rep.stats.merge_cost, 0u);
    EXPECT_EQ(rep.stats.moves, 0u);
  }
}
