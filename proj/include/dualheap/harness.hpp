#pragma once

// Deterministic case generation, benchmark sweeps, CSV output and the
// oracle verification runner.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dualheap/instrumentation.hpp"

namespace dualheap {

// SplitMix64.
struct RngState {
  std::uint64_t state = 0;
  friend bool operator==(const RngState&, const RngState&) = default;
};

struct RngDraw {
  std::uint64_t value = 0;
  RngState next;
};

RngDraw rng_next(RngState s);

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_{seed} {}

  std::uint64_t next() {
    const RngDraw d = rng_next(state_);
    state_ = d.next;
    return d.value;
  }

  RngState state() const { return state_; }

 private:
  RngState state_;
};

inline constexpr std::uint64_t kDefaultValueBound = std::uint64_t{1} << 31;

// n values, each the next SplitMix64 output (seeded with `seed`) mod value_bound.
std::vector<Element> generate_case(std::uint64_t seed, std::size_t n, std::uint64_t value_bound = kDefaultValueBound);

// base_seed XOR rng_next(base_seed + 0x1000*n + trial).value
std::uint64_t trial_seed(std::uint64_t base_seed, std::uint64_t n, std::uint64_t trial);

std::uint64_t checksum(std::span<const Element> data);

enum class Algorithm : std::uint8_t { dualheap, dualheap_nophase1, quickselect, quickselect_median3 };

std::string_view algorithm_name(Algorithm algo);
std::optional<Algorithm> parse_algorithm(std::string_view name);
std::vector<Algorithm> all_algorithms();

struct RunOutcome {
  Element kth = 0;
  std::size_t ns = 0;
  OpCounters counters;
  std::int64_t elapsed_ns = 0;
};

// Runs one algorithm in place on data. `workers` applies to the dualheap
// construction phases only.
RunOutcome run_algorithm(Algorithm algo, std::span<Element> data, std::int64_t k, std::size_t workers = 1,
                         std::optional<std::uint64_t> treeswap_cap = std::nullopt);

struct ExperimentConfig {
  std::vector<std::size_t> n_values;
  std::optional<std::int64_t> explicit_k;  // unset: k = max(1, n/2)
  std::size_t trials_per_n = 100;
  std::uint64_t base_seed = 1;
  std::vector<Algorithm> algorithms = all_algorithms();
  std::size_t workers = 1;
  std::optional<std::uint64_t> treeswap_cap;
  bool record_timing = false;  // elapsed_ns is 0 unless set, which keeps CSV output reproducible

  // Throws std::invalid_argument or InvalidK.
  void validate() const;
  std::int64_t k_for(std::size_t n) const;
};

// Log-spaced n grid used by the default sweep.
std::vector<std::size_t> default_n_values();

struct TrialRecord {
  std::string algo;
  std::uint64_t n = 0;
  std::uint64_t k = 0;
  std::uint64_t seed = 0;
  std::uint64_t comparisons = 0;
  std::uint64_t moves = 0;
  std::uint64_t promotions = 0;
  std::uint64_t treeswaps_toplevel = 0;
  std::uint64_t treeswaps_recursive = 0;
  std::uint64_t max_treeswap_depth = 0;
  std::uint64_t transfers = 0;
  std::uint64_t phase1_comparisons = 0;
  std::uint64_t phase1_moves = 0;
  std::uint64_t phase2_comparisons = 0;
  std::uint64_t phase2_moves = 0;
  std::uint64_t phase3_comparisons = 0;
  std::uint64_t phase3_moves = 0;
  std::uint64_t elapsed_ns = 0;
  std::uint64_t workers = 1;

  std::uint64_t total_ops() const { return comparisons + moves; }
  friend bool operator==(const TrialRecord&, const TrialRecord&) = default;
};

TrialRecord make_record(Algorithm algo, std::uint64_t n, std::uint64_t k, std::uint64_t seed,
                        const RunOutcome& outcome, std::uint64_t workers);

// One record per (n, trial, algorithm) in config order. Every algorithm of a
// trial sees an identical copy of the generated input.
std::vector<TrialRecord> run_trials(const ExperimentConfig& config);

inline constexpr std::string_view kCsvHeader =
    "algo,n,k,seed,comparisons,moves,promotions,treeswaps_toplevel,treeswaps_recursive,"
    "max_treeswap_depth,transfers,phase1_comparisons,phase1_moves,phase2_comparisons,"
    "phase2_moves,phase3_comparisons,phase3_moves,elapsed_ns,workers";

void write_csv(std::span<const TrialRecord> records, std::ostream& out);
// Throws std::runtime_error naming the path on I/O failure.
void write_csv(std::span<const TrialRecord> records, const std::filesystem::path& path);

// Throws std::runtime_error on malformed input.
std::vector<TrialRecord> read_csv(std::istream& in);

// --- verification ---------------------------------------------------------

struct SelectorOutcome {
  Element kth = 0;
  std::optional<std::size_t> partition_ns;  // set when the output claims a partition at this index
};

struct NamedSelector {
  std::string name;
  std::function<SelectorOutcome(std::span<Element>, std::int64_t)> run;
};

// The four benchmarked algorithms.
std::vector<NamedSelector> default_selectors();

struct VerifyFailure {
  std::uint64_t seed = 0;  // generate_case(seed, n) reproduces the input
  std::size_t n = 0;
  std::int64_t k = 0;
  std::string algo;
  std::string message;
};

struct VerifySummary {
  std::size_t trials = 0;
  std::size_t checks = 0;
  std::vector<VerifyFailure> failures;

  // Heap constructions observed in the step-by-step dualheap pipeline.
  std::size_t constructions = 0;
  // Constructions over m nodes with promotions > m - floor(lg m) - 1.
  std::size_t promotion_bound_violations = 0;
  // Constructions over m nodes with promotions > m - popcount(m) (sum of node heights).
  std::size_t height_sum_violations = 0;
  std::vector<std::string> promotion_bound_examples;  // first few, for diagnostics
  std::size_t depth_violations = 0;
  std::uint64_t max_depth_seen = 0;

  bool passed() const { return failures.empty() && depth_violations == 0 && height_sum_violations == 0; }
};

VerifySummary verify_run(std::size_t trials, std::size_t max_n, std::uint64_t seed);
VerifySummary verify_run(std::size_t trials, std::size_t max_n, std::uint64_t seed,
                         std::span<const NamedSelector> selectors);

std::string format_summary(const VerifySummary& summary);

}  // namespace dualheap
