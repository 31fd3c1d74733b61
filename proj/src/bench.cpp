#include "powersort/bench.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace powersort {

namespace {

template <typename Key, typename KeyLess>
std::vector<ExperimentResult> sort_all(const WorkloadSpec& spec, const Instance<Key>& inst,
                                       const std::vector<Algorithm>& algos) {
  using Item = SortItem<Key>;
  const ByKey<KeyLess> less{};
  std::vector<Item> reference = inst.items;
  std::stable_sort(reference.begin(), reference.end(), less);

  std::vector<ExperimentResult> results;
  for (Algorithm algo : algos) {
    std::vector<Item> data = inst.items;
    const auto t0 = std::chrono::steady_clock::now();
    SortReport rep = sort(std::span<Item>(data), algo, less);
    const auto t1 = std::chrono::steady_clock::now();

    for (std::size_t i = 0; i < data.size(); ++i) {
      if (data[i].origin != reference[i].origin || !(data[i].key == reference[i].key)) {
        throw CorrectnessError("correctness violation: algo " +
                               std::string(algorithm_name(algo)) + " seed " +
                               std::to_string(spec.seed) + " (" + to_string(spec) +
                               ") at index " + std::to_string(i));
      }
    }

    ExperimentResult r;
    ExperimentRow& row = r.row;
    row.algo = algorithm_name(algo);
    row.profile = profile_name(spec.profile);
    row.n = data.size();
    row.S = spec.S;
    row.seed = spec.seed;
    row.comparisons = rep.stats.comparisons;
    row.moves = rep.stats.moves;
    row.merge_cost = rep.stats.merge_cost;
    row.entropy_bits = rep.runs.lengths.empty() ? 0.0 : run_length_entropy(rep.runs);
    row.peak_extra_words = rep.stats.peak_extra_words;
    row.max_stack_height = rep.stats.max_stack_height;
    row.wall_time_ns = static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count());
    r.run_formation_comparisons = rep.stats.run_formation_comparisons;
    r.run_formation_moves = rep.stats.run_formation_moves;
    r.page_size = rep.vm_page_size;
    r.free_list_underflows = rep.vm.free_list_underflows;
    r.copy_out_evictions = rep.vm.copy_out_evictions;
    r.inplace_max_depth = rep.inplace_max_depth;
    results.push_back(std::move(r));
  }
  return results;
}

template <typename Key, typename KeyLess>
std::vector<ExperimentResult> presort_and_run(const WorkloadSpec& spec, Instance<Key> inst,
                                              Rng& rng, const std::vector<Algorithm>& algos) {
  inject_presortedness(std::span<SortItem<Key>>(inst.items), spec.S, rng, ByKey<KeyLess>{});
  return sort_all<Key, KeyLess>(spec, inst, algos);
}

}  // namespace

std::vector<ExperimentResult> run_experiments(const WorkloadSpec& spec,
                                              const std::vector<Algorithm>& algos,
                                              std::optional<std::size_t> length) {
  Rng rng(spec.seed);
  const std::size_t n = length ? *length : draw_length(spec.N, rng);
  switch (spec.profile) {
    case Profile::kInt:
      return presort_and_run<std::uint32_t, std::less<>>(spec, generate_int(n, rng), rng, algos);
    case Profile::kPtr:
      return presort_and_run<const Blob*, DerefLess>(spec, generate_ptr(n, rng), rng, algos);
    case Profile::kBlobRandom:
      return presort_and_run<Blob, std::less<>>(spec, generate_blob(n, rng, false), rng, algos);
    case Profile::kBlobZero:
      return presort_and_run<Blob, std::less<>>(spec, generate_blob(n, rng, true), rng, algos);
  }
  throw std::invalid_argument("run_experiments: unknown profile");
}

ExperimentResult run_experiment(const WorkloadSpec& spec, Algorithm algo) {
  return run_experiments(spec, {algo}).front();
}

double expected_entropy(double EN, double S) {
  if (EN <= S + 1) return 0.0;
  return EN * std::log2(EN / (S + 1));
}

void emit_csv(std::ostream& out, const std::vector<ExperimentRow>& rows) {
  out << kCsvHeader << '\n';
  char entropy[64];
  for (const auto& r : rows) {
    std::snprintf(entropy, sizeof entropy, "%.6f", r.entropy_bits);
    out << r.algo << ',' << r.profile << ',' << r.n << ',' << r.S << ',' << r.seed << ','
        << r.comparisons << ',' << r.moves << ',' << r.merge_cost << ',' << entropy << ','
        << r.peak_extra_words << ',' << r.max_stack_height << ',' << r.wall_time_ns << '\n';
  }
}

std::vector<ExperimentRow> parse_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw std::invalid_argument("parse_csv: missing or unexpected header");
  }
  std::vector<ExperimentRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) f.push_back(field);
    if (f.size() != 12) throw std::invalid_argument("parse_csv: expected 12 fields");
    try {
      ExperimentRow r;
      r.algo = f[0];
      r.profile = f[1];
      r.n = std::stoull(f[2]);
      r.S = std::stoull(f[3]);
      r.seed = std::stoull(f[4]);
      r.comparisons = std::stoull(f[5]);
      r.moves = std::stoull(f[6]);
      r.merge_cost = std::stoull(f[7]);
      r.entropy_bits = std::stod(f[8]);
      r.peak_extra_words = std::stoull(f[9]);
      r.max_stack_height = std::stoull(f[10]);
      r.wall_time_ns = std::stoull(f[11]);
      rows.push_back(std::move(r));
    } catch (const std::logic_error&) {
      throw std::invalid_argument("parse_csv: bad number in row: " + line);
    }
  }
  return rows;
}

std::uint64_t memory_budget(Algorithm algo, std::uint64_t n, std::uint64_t words) {
  switch (algo) {
    case Algorithm::kCPython: return (n + 1) / 2 * words;
    case Algorithm::kPingpong:
    case Algorithm::kPingpongUnopt: return n * words;
    case Algorithm::kVm: {
      if (n == 0) return 0;
      const std::uint64_t p = vm::page_size(n, words);
      const std::uint64_t lg = vm::ceil_log2(n);
      return (lg + 4) * p * words + ((n + p - 1) / p + lg + 16);
    }
    case Algorithm::kInplace: return 0;
  }
  return 0;
}

std::vector<BoundCheck> check_bounds(const ExperimentRow& row) {
  std::vector<BoundCheck> out;
  auto add = [&](std::string name, double value, double bound) {
    out.push_back({std::move(name), value <= bound, bound - value});
  };
  const double n = static_cast<double>(row.n);
  const double M = static_cast<double>(row.merge_cost);
  add("merge_cost<=n(H+2)", M, n * (row.entropy_bits + 2.0));
  add("stack_height<=ceil(lg n)+1", static_cast<double>(row.max_stack_height),
      row.n <= 1 ? 0.0 : vm::ceil_log2(row.n) + 1.0);

  const auto algo = parse_algorithm(row.algo);
  const auto profile = parse_profile(row.profile);
  if (!algo || !profile) {
    out.push_back({"known algo/profile", false, -1.0});
    return out;
  }
  if (*algo == Algorithm::kInplace) return out;

  add("comparisons<=M+n", static_cast<double>(row.comparisons), M + n);
  const double moves = static_cast<double>(row.moves);
  switch (*algo) {
    case Algorithm::kCPython: add("moves<=1.5M+n", moves, 1.5 * M + n); break;
    case Algorithm::kPingpong: add("moves<=M+n", moves, M + n); break;
    case Algorithm::kVm: add("moves<=M+3n", moves, M + 3.0 * n); break;
    default: break;
  }
  add("peak_extra_words<=budget", static_cast<double>(row.peak_extra_words),
      static_cast<double>(memory_budget(*algo, row.n, profile_words(*profile))));
  return out;
}

}  // namespace powersort
