// Experiment harness: generate, sort, verify, record.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "powersort/sort.hpp"
#include "powersort/workload.hpp"

namespace powersort {

struct ExperimentRow {
  std::string algo;
  std::string profile;
  std::uint64_t n = 0;
  std::uint64_t S = 0;
  std::uint64_t seed = 0;
  std::uint64_t comparisons = 0;
  std::uint64_t moves = 0;
  std::uint64_t merge_cost = 0;
  double entropy_bits = 0.0;
  std::uint64_t peak_extra_words = 0;
  std::uint64_t max_stack_height = 0;
  std::uint64_t wall_time_ns = 0;

  bool operator==(const ExperimentRow&) const = default;
};

/// A row plus details that do not go into the CSV.
struct ExperimentResult {
  ExperimentRow row;
  std::uint64_t run_formation_comparisons = 0;
  std::uint64_t run_formation_moves = 0;
  std::uint64_t page_size = 0;
  std::uint64_t free_list_underflows = 0;
  std::uint64_t copy_out_evictions = 0;
  std::uint64_t inplace_max_depth = 0;
};

/// Thrown when a sort's output differs from the reference stable sort.
class CorrectnessError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Generates the input for `spec`, sorts one copy per algorithm, checks each
/// output against a reference stable sort, and returns one result per
/// algorithm in the given order. Every algorithm sees the same input.
/// `length`, when given, replaces the drawn input length.
std::vector<ExperimentResult> run_experiments(const WorkloadSpec& spec,
                                              const std::vector<Algorithm>& algos,
                                              std::optional<std::size_t> length = std::nullopt);

ExperimentResult run_experiment(const WorkloadSpec& spec, Algorithm algo);

/// EN lg(EN / (S + 1)), or 0 when EN <= S + 1.
double expected_entropy(double EN, double S);

inline constexpr const char* kCsvHeader =
    "algo,profile,n,S,seed,comparisons,moves,merge_cost,entropy_bits,peak_extra_words,"
    "max_stack_height,wall_time_ns";

void emit_csv(std::ostream& out, const std::vector<ExperimentRow>& rows);
/// Parses what emit_csv writes. Throws std::invalid_argument on bad input.
std::vector<ExperimentRow> parse_csv(std::istream& in);

struct BoundCheck {
  std::string name;
  bool pass = false;
  // bound - value; negative when violated.
  double slack = 0.0;
};

/// Analytic bounds for one row: merge cost, stack height, comparisons,
/// moves and memory. Budgets that do not apply to an algorithm are skipped.
std::vector<BoundCheck> check_bounds(const ExperimentRow& row);

/// Memory budget in words for `algo` on n elements of `words` words each.
std::uint64_t memory_budget(Algorithm algo, std::uint64_t n, std::uint64_t words);

}  // namespace powersort
