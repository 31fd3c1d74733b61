#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "powersort/core.hpp"

using namespace powersort;

TEST(RecordMerge, AddsBothLengths) {
  MergeStats s;
  s = record_merge(s, 3, 5);
  EXPECT_EQ(s.merge_cost, 8u);
  s = record_merge(s, 8, 8);
  EXPECT_EQ(s.merge_cost, 24u);
  EXPECT_EQ(s.comparisons, 0u);
  EXPECT_EQ(s.moves, 0u);
}

TEST(RecordMerge, RejectsEmptyRun) {
  EXPECT_THROW(record_merge({}, 0, 4), std::invalid_argument);
  EXPECT_THROW(record_merge({}, 4, 0), std::invalid_argument);
}

TEST(RunLengthEntropy, Examples) {
  EXPECT_DOUBLE_EQ(run_length_entropy({{8}}), 0.0);
  EXPECT_DOUBLE_EQ(run_length_entropy({{1, 1}}), 1.0);
  EXPECT_DOUBLE_EQ(run_length_entropy({{2, 2, 4}}), 1.5);
}

TEST(RunLengthEntropy, RejectsEmpty) {
  EXPECT_THROW(run_length_entropy({}), std::invalid_argument);
  EXPECT_THROW(run_length_entropy({{3, 0}}), std::invalid_argument);
}

TEST(RunLengthEntropy, BoundedByLogOfRunCount) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 500; ++trial) {
    RunDecomposition d;
    const std::size_t r = 1 + rng() % 40;
    for (std::size_t i = 0; i < r; ++i) d.lengths.push_back(1 + rng() % 100);
    const double h = run_length_entropy(d);
    EXPECT_GE(h, 0.0);
    EXPECT_LE(h, std::log2(static_cast<double>(r)) + 1e-12);
    if (r == 1) EXPECT_EQ(h, 0.0);
    else EXPECT_GT(h, 0.0);
  }
}

TEST(NaturalRuns, SplitsAtDescents) {
  const int v[] = {1, 2, 2, 1, 5, 0, 0, 3};
  auto d = natural_runs(std::span<const int>(v), std::less<>{});
  EXPECT_EQ(d.lengths, (std::vector<std::size_t>{3, 2, 3}));
  EXPECT_TRUE(natural_runs(std::span<const int>(), std::less<>{}).lengths.empty());
}

TEST(StabilityOracle, Examples) {
  using I = SortItem<int>;
  const I ok[] = {{1, 0}, {1, 1}, {2, 2}};
  EXPECT_TRUE(stability_oracle(std::span<const I>(ok)));
  const I swapped[] = {{1, 1}, {1, 0}};
  EXPECT_FALSE(stability_oracle(std::span<const I>(swapped)));
  const I unsorted[] = {{2, 0}, {1, 1}};
  EXPECT_FALSE(stability_oracle(std::span<const I>(unsorted)));
  EXPECT_TRUE(stability_oracle(std::span<const I>()));
}

TEST(SortContext, CountsEveryOperation) {
  SortContext<std::less<>> ctx;
  int a = 1, b = 2;
  EXPECT_TRUE(ctx.less(a, b));
  EXPECT_FALSE(ctx.less(b, a));
  ctx.move(a, b);
  int t = ctx.take(a);
  ctx.swap(a, t);
  EXPECT_EQ(ctx.stats().comparisons, 2u);
  EXPECT_EQ(ctx.stats().moves, 5u);
  ctx.note_extra_words(10);
  ctx.note_extra_words(4);
  ctx.note_stack_height(3);
  ctx.note_stack_height(1);
  EXPECT_EQ(ctx.stats().peak_extra_words, 10u);
  EXPECT_EQ(ctx.stats().max_stack_height, 3u);
}

TEST(PayloadWords, RoundsUp) {
  EXPECT_EQ(payload_words_v<std::uint32_t>, 1u);
  EXPECT_EQ(payload_words_v<SortItem<std::uint32_t>>, 2u);
  EXPECT_EQ(payload_words_v<char>, 1u);
}
