#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "powersort/bench.hpp"

using namespace powersort;

TEST(ExpectedEntropy, Values) {
  EXPECT_DOUBLE_EQ(expected_entropy(8, 1), 16.0);
  EXPECT_EQ(expected_entropy(11, 10), 0.0);
  EXPECT_EQ(expected_entropy(5, 10), 0.0);
  // 0.95e7 lg(0.95e7 / (1e6 + 1))
  EXPECT_NEAR(expected_entropy(0.95e7, 1e6), 30855297.672118, 1e-3);
}

TEST(Csv, HeaderOnlyForNoRows) {
  std::ostringstream out;
  emit_csv(out, {});
  EXPECT_EQ(out.str(), std::string(kCsvHeader) + "\n");
}

TEST(Csv, OneRowHasTwelveFields) {
  ExperimentRow r{"vm", "int", 10, 100, 1, 20, 30, 40, 1.25, 50, 3, 999};
  std::ostringstream out;
  emit_csv(out, {r});
  const std::string s = out.str();
  const auto line = s.substr(s.find('\n') + 1);
  EXPECT_EQ(line, "vm,int,10,100,1,20,30,40,1.250000,50,3,999\n");
  EXPECT_EQ(std::count(line.begin(), line.end(), ','), 11);
}

TEST(Csv, RoundTrip) {
  std::vector<ExperimentRow> rows;
  for (Algorithm a : kAllAlgorithms) {
    rows.push_back(run_experiment({Profile::kInt, 3000, 10, 5}, a).row);
  }
  for (auto& r : rows) r.entropy_bits = std::round(r.entropy_bits * 1e6) / 1e6;
  std::stringstream ss;
  emit_csv(ss, rows);
  const auto back = parse_csv(ss);
  ASSERT_EQ(back.size(), rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(back[i].algo, rows[i].algo);
    EXPECT_EQ(back[i].moves, rows[i].moves);
    EXPECT_NEAR(back[i].entropy_bits, rows[i].entropy_bits, 1e-9);
    auto b = back[i];
    b.entropy_bits = rows[i].entropy_bits;
    EXPECT_EQ(b, rows[i]);
  }
  std::istringstream bad("nope\n");
  EXPECT_THROW(parse_csv(bad), std::invalid_argument);
  std::istringstream short_row(std::string(kCsvHeader) + "\nvm,int,1\n");
  EXPECT_THROW(parse_csv(short_row), std::invalid_argument);
}

TEST(RunExperiment, DeterministicAndMergePhaseWithinBounds) {
  const WorkloadSpec spec{Profile::kInt, 10000, 100, 1};
  const auto res = run_experiment(spec, Algorithm::kVm);
  const auto& a = res.row;
  const auto b = run_experiment(spec, Algorithm::kVm).row;
  EXPECT_EQ(a.comparisons, b.comparisons);
  EXPECT_EQ(a.moves, b.moves);
  EXPECT_EQ(a.merge_cost, b.merge_cost);
  // Run detection costs at most n - 1 comparisons; merging at most M.
  // Boosting short runs by insertion is on top of that.
  EXPECT_LE(a.comparisons - res.run_formation_comparisons, a.merge_cost);
  EXPECT_LE(a.moves - res.run_formation_moves, a.merge_cost + 3 * a.n);
  EXPECT_GE(a.n, 9000u);
  EXPECT_LE(a.n, 10000u);
}

TEST(RunExperiment, EveryProfileAndAlgorithm) {
  for (Profile p : kAllProfiles) {
    const auto res = run_experiments({p, 2000, 50, 3}, std::vector<Algorithm>(
                                                          std::begin(kAllAlgorithms),
                                                          std::end(kAllAlgorithms)));
    ASSERT_EQ(res.size(), std::size(kAllAlgorithms));
    for (const auto& r : res) {
      EXPECT_EQ(r.row.profile, profile_name(p));
      EXPECT_EQ(r.row.merge_cost, res[0].row.merge_cost);
      EXPECT_EQ(r.row.n, res[0].row.n);
    }
  }
}

TEST(CheckBounds, SyntheticMergeCostViolation) {
  ExperimentRow r{"pingpong", "int", 100, 2, 0, 0, 0, 0, 1.0, 0, 1, 0};
  r.merge_cost = 100 * 3 + 1;
  const auto checks = check_bounds(r);
  bool found = false;
  for (const auto& c : checks) {
    if (c.name == "merge_cost<=n(H+2)") {
      found = true;
      EXPECT_FALSE(c.pass);
      EXPECT_DOUBLE_EQ(c.slack, -1.0);
    }
  }
  EXPECT_TRUE(found);
}

TEST(CheckBounds, VerifiedRowsPassOnNearlySortedInput) {
  for (Algorithm a : {Algorithm::kCPython, Algorithm::kPingpong, Algorithm::kVm}) {
    const auto row = run_experiment({Profile::kInt, 20000, 1'000'000, 7}, a).row;
    for (const auto& c : check_bounds(row)) EXPECT_TRUE(c.pass) << row.algo << ' ' << c.name;
  }
}

TEST(MemoryBudget, Formulas) {
  EXPECT_EQ(memory_budget(Algorithm::kCPython, 11, 2), 12u);
  EXPECT_EQ(memory_budget(Algorithm::kPingpong, 11, 2), 22u);
  // n = 1000, T = 2: P = 16, lg = 10.
  EXPECT_EQ(memory_budget(Algorithm::kVm, 1000, 2), 14u * 16 * 2 + (63 + 10 + 16));
  EXPECT_EQ(memory_budget(Algorithm::kInplace, 1000, 2), 0u);
}

TEST(CheckBounds, ShortRunsExceedBudgetsThroughBoosting) {
  const auto res = run_experiment({Profile::kInt, 20000, 2, 7}, Algorithm::kPingpong);
  const auto& row = res.row;
  bool moves_fail = false;
  for (const auto& c : check_bounds(row)) {
    if (c.name == "moves<=M+n") moves_fail = !c.pass;
  }
  EXPECT_TRUE(moves_fail);
  // Without the insertion-sort share the merge phase is within budget.
  EXPECT_LE(row.moves - res.run_formation_moves, row.merge_cost + row.n);
}
