#include "dualheap/harness.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "dualheap/baselines.hpp"
#include "dualheap/dualheap.hpp"

namespace dualheap {

RngDraw rng_next(RngState s) {
  RngDraw d;
  d.next.state = s.state + 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = d.next.state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  d.value = z ^ (z >> 31);
  return d;
}

std::vector<Element> generate_case(std::uint64_t seed, std::size_t n, std::uint64_t value_bound) {
  if (value_bound < 2) throw std::invalid_argument("value_bound must be at least 2");
  SplitMix64 rng(seed);
  std::vector<Element> out(n);
  for (auto& v : out) v = static_cast<Element>(rng.next() % value_bound);
  return out;
}

std::uint64_t trial_seed(std::uint64_t base_seed, std::uint64_t n, std::uint64_t trial) {
  return base_seed ^ rng_next(RngState{base_seed + 0x1000 * n + trial}).value;
}

std::uint64_t checksum(std::span<const Element> data) {
  // FNV-1a over the values' bytes.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (Element v : data) {
    auto u = static_cast<std::uint64_t>(v);
    for (int i = 0; i < 8; ++i) {
      h ^= (u >> (8 * i)) & 0xff;
      h *= 0x100000001b3ULL;
    }
  }
  return h;
}

std::string_view algorithm_name(Algorithm algo) {
  switch (algo) {
    case Algorithm::dualheap:
      return "dualheap";
    case Algorithm::dualheap_nophase1:
      return "dualheap_nophase1";
    case Algorithm::quickselect:
      return "quickselect";
    case Algorithm::quickselect_median3:
      return "quickselect_median3";
  }
  return "unknown";
}

std::optional<Algorithm> parse_algorithm(std::string_view name) {
  for (Algorithm a : all_algorithms()) {
    if (algorithm_name(a) == name) return a;
  }
  return std::nullopt;
}

std::vector<Algorithm> all_algorithms() {
  return {Algorithm::dualheap, Algorithm::dualheap_nophase1, Algorithm::quickselect, Algorithm::quickselect_median3};
}

namespace {

bool is_dualheap(Algorithm algo) { return algo == Algorithm::dualheap || algo == Algorithm::dualheap_nophase1; }

}  // namespace

RunOutcome run_algorithm(Algorithm algo, std::span<Element> data, std::int64_t k, std::size_t workers,
                         std::optional<std::uint64_t> treeswap_cap) {
  RunOutcome out;
  const auto start = std::chrono::steady_clock::now();
  if (is_dualheap(algo)) {
    SelectOptions opts;
    opts.skip_phase1 = algo == Algorithm::dualheap_nophase1;
    opts.treeswap_cap = treeswap_cap;
    opts.parallel_workers = workers;
    SelectResult r = dualheap_select(data, k, opts);
    out.kth = r.kth;
    out.ns = r.ns;
    out.counters = r.counters;
  } else {
    const PivotRule rule = algo == Algorithm::quickselect ? PivotRule::last_element : PivotRule::median_of_three;
    QuickselectResult r = quickselect(data, k, rule, &out.counters);
    out.kth = r.kth;
    out.ns = r.ns;
  }
  out.elapsed_ns =
      std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - start).count();
  return out;
}

void ExperimentConfig::validate() const {
  if (n_values.empty()) throw std::invalid_argument("n_values must not be empty");
  if (trials_per_n < 1) throw std::invalid_argument("trials_per_n must be at least 1");
  if (algorithms.empty()) throw std::invalid_argument("at least one algorithm is required");
  if (workers < 1) throw std::invalid_argument("workers must be at least 1");
  if (treeswap_cap && *treeswap_cap < 1) throw std::invalid_argument("treeswap_cap must be at least 1");
  for (std::size_t n : n_values) {
    if (n < 1) throw std::invalid_argument("every n must be at least 1");
    partition_point(n, k_for(n));
  }
}

std::int64_t ExperimentConfig::k_for(std::size_t n) const {
  if (explicit_k) return *explicit_k;
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(n / 2));
}

std::vector<std::size_t> default_n_values() { return {100, 316, 1000, 3162, 10000, 31623, 100000}; }

TrialRecord make_record(Algorithm algo, std::uint64_t n, std::uint64_t k, std::uint64_t seed,
                        const RunOutcome& outcome, std::uint64_t workers) {
  const OpCounters& c = outcome.counters;
  TrialRecord r;
  r.algo = std::string(algorithm_name(algo));
  r.n = n;
  r.k = k;
  r.seed = seed;
  r.comparisons = c.total_comparisons();
  r.moves = c.total_moves();
  r.promotions = c.total_promotions();
  r.treeswaps_toplevel = c.treeswaps_toplevel;
  r.treeswaps_recursive = c.treeswaps_recursive;
  r.max_treeswap_depth = c.max_treeswap_depth;
  r.transfers = c.transfers;
  if (is_dualheap(algo)) {
    r.phase1_comparisons = c.comparisons_in(Phase::phase1);
    r.phase1_moves = c.moves_in(Phase::phase1);
    r.phase2_comparisons = c.comparisons_in(Phase::phase2);
    r.phase2_moves = c.moves_in(Phase::phase2);
    r.phase3_comparisons = c.comparisons_in(Phase::phase3);
    r.phase3_moves = c.moves_in(Phase::phase3);
  }
  r.elapsed_ns = static_cast<std::uint64_t>(outcome.elapsed_ns);
  r.workers = workers;
  return r;
}

std::vector<TrialRecord> run_trials(const ExperimentConfig& config) {
  config.validate();
  std::vector<TrialRecord> records;
  records.reserve(config.n_values.size() * config.trials_per_n * config.algorithms.size());

  for (std::size_t n : config.n_values) {
    const std::int64_t k = config.k_for(n);
    for (std::size_t t = 0; t < config.trials_per_n; ++t) {
      const std::uint64_t seed = trial_seed(config.base_seed, n, t);
      const std::vector<Element> input = generate_case(seed, n);
      const std::uint64_t input_sum = checksum(input);
      for (Algorithm algo : config.algorithms) {
        std::vector<Element> work = input;
        if (checksum(work) != input_sum) throw std::logic_error("trial input copy diverged");
        const std::size_t workers = is_dualheap(algo) ? config.workers : 1;
        RunOutcome outcome;
        try {
          outcome = run_algorithm(algo, work, k, workers, config.treeswap_cap);
        } catch (const CapExceeded& e) {
          std::cerr << "error: " << e.what() << " [algo=" << algorithm_name(algo) << " n=" << n << " k=" << k
                    << " seed=" << seed << "]\n";
          throw;
        }
        if (!config.record_timing) outcome.elapsed_ns = 0;
        records.push_back(make_record(algo, n, static_cast<std::uint64_t>(k), seed, outcome, workers));
      }
    }
  }
  return records;
}

void write_csv(std::span<const TrialRecord> records, std::ostream& out) {
  out << kCsvHeader << '\n';
  for (const TrialRecord& r : records) {
    out << r.algo << ',' << r.n << ',' << r.k << ',' << r.seed << ',' << r.comparisons << ',' << r.moves << ','
        << r.promotions << ',' << r.treeswaps_toplevel << ',' << r.treeswaps_recursive << ','
        << r.max_treeswap_depth << ',' << r.transfers << ',' << r.phase1_comparisons << ',' << r.phase1_moves << ','
        << r.phase2_comparisons << ',' << r.phase2_moves << ',' << r.phase3_comparisons << ',' << r.phase3_moves
        << ',' << r.elapsed_ns << ',' << r.workers << '\n';
  }
}

void write_csv(std::span<const TrialRecord> records, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_csv(records, out);
  out.flush();
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

namespace {

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    fields.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

std::uint64_t parse_u64(std::string_view field, std::size_t line_no) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc{} || ptr != field.data() + field.size()) {
    throw std::runtime_error("line " + std::to_string(line_no) + ": bad integer '" + std::string(field) + "'");
  }
  return v;
}

}  // namespace

std::vector<TrialRecord> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) throw std::runtime_error("missing or unexpected CSV header");

  std::vector<TrialRecord> records;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const auto f = split_commas(line);
    if (f.size() != 19) throw std::runtime_error("line " + std::to_string(line_no) + ": expected 19 fields");
    TrialRecord r;
    r.algo = std::string(f[0]);
    std::uint64_t* numeric[] = {&r.n,
                                &r.k,
                                &r.seed,
                                &r.comparisons,
                                &r.moves,
                                &r.promotions,
                                &r.treeswaps_toplevel,
                                &r.treeswaps_recursive,
                                &r.max_treeswap_depth,
                                &r.transfers,
                                &r.phase1_comparisons,
                                &r.phase1_moves,
                                &r.phase2_comparisons,
                                &r.phase2_moves,
                                &r.phase3_comparisons,
                                &r.phase3_moves,
                                &r.elapsed_ns,
                                &r.workers};
    for (std::size_t i = 0; i < std::size(numeric); ++i) *numeric[i] = parse_u64(f[i + 1], line_no);
    records.push_back(std::move(r));
  }
  return records;
}

// --- verification ---------------------------------------------------------

std::vector<NamedSelector> default_selectors() {
  std::vector<NamedSelector> out;
  for (Algorithm algo : all_algorithms()) {
    out.push_back({std::string(algorithm_name(algo)), [algo](std::span<Element> data, std::int64_t k) {
                     const RunOutcome r = run_algorithm(algo, data, k);
                     return SelectorOutcome{r.kth, r.ns};
                   }});
  }
  return out;
}

namespace {

struct ConstructionCheck {
  VerifySummary& summary;

  void operator()(std::string_view what, std::uint64_t m, std::uint64_t promotions) {
    if (m == 0) return;
    ++summary.constructions;
    if (promotions > m - static_cast<std::uint64_t>(std::popcount(m))) ++summary.height_sum_violations;
    if (promotions > m - floor_log2(m) - 1) {
      ++summary.promotion_bound_violations;
      if (summary.promotion_bound_examples.size() < 5) {
        std::ostringstream os;
        os << what << " m=" << m << " promotions=" << promotions << " bound=" << (m - floor_log2(m) - 1);
        summary.promotion_bound_examples.push_back(os.str());
      }
    }
  }
};

// Runs the dualheap phases one by one so each construction's promotions can
// be checked, then verifies the resulting partition.
std::optional<std::string> checked_pipeline(std::vector<Element> data, std::int64_t k, bool skip_phase1,
                                            Element expected, VerifySummary& summary) {
  ConstructionCheck check{summary};
  OpCounters c;
  Meter<> meter(&c);
  const std::size_t ns = partition_point(data.size(), k);

  if (!skip_phase1) {
    build_whole_heap(data, meter);
    check("phase1", data.size(), c.total_promotions());
  }
  const DualHeapView view(data, ns);
  meter.set_phase(Phase::phase2);
  std::uint64_t before = c.total_promotions();
  build_small_heap(view, meter);
  check("phase2 small", ns, c.total_promotions() - before);
  before = c.total_promotions();
  build_large_heap(view, meter);
  check("phase2 large", view.nl(), c.total_promotions() - before);

  meter.set_phase(Phase::phase3);
  exchange_phase(view, meter, default_treeswap_cap(data.size()));
  summary.max_depth_seen = std::max(summary.max_depth_seen, c.max_treeswap_depth);
  if (c.max_treeswap_depth > treeswap_depth_limit(data.size())) {
    ++summary.depth_violations;
    return "TreeSwap depth " + std::to_string(c.max_treeswap_depth) + " exceeds limit";
  }
  const PartitionReport report = verify_partition(data, ns, expected);
  if (!report.ok) return report.message;
  return std::nullopt;
}

}  // namespace

VerifySummary verify_run(std::size_t trials, std::size_t max_n, std::uint64_t seed) {
  const auto selectors = default_selectors();
  return verify_run(trials, max_n, seed, selectors);
}

VerifySummary verify_run(std::size_t trials, std::size_t max_n, std::uint64_t seed,
                         std::span<const NamedSelector> selectors) {
  if (trials < 1 || max_n < 1) throw std::invalid_argument("trials and max_n must be at least 1");
  VerifySummary summary;
  SplitMix64 rng(seed);
  for (std::size_t t = 0; t < trials; ++t) {
    const std::size_t n = 1 + rng.next() % max_n;
    const auto k = static_cast<std::int64_t>(1 + rng.next() % n);
    const std::uint64_t case_seed = rng.next();
    const std::vector<Element> input = generate_case(case_seed, n);
    const Element expected = kth_by_sort(input, k);
    ++summary.trials;

    auto fail = [&](std::string algo, std::string message) {
      summary.failures.push_back({case_seed, n, k, std::move(algo), std::move(message)});
    };

    for (const NamedSelector& sel : selectors) {
      ++summary.checks;
      std::vector<Element> work = input;
      try {
        const SelectorOutcome got = sel.run(work, k);
        if (got.kth != expected) {
          fail(sel.name, "returned " + std::to_string(got.kth) + ", expected " + std::to_string(expected));
          continue;
        }
        if (got.partition_ns) {
          const PartitionReport report = verify_partition(work, *got.partition_ns, expected);
          if (!report.ok) fail(sel.name, report.message);
        }
        std::vector<Element> a = input;
        std::vector<Element> b = work;
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        if (a != b) fail(sel.name, "output is not a permutation of the input");
      } catch (const std::exception& e) {
        fail(sel.name, e.what());
      }
    }

    for (bool skip : {false, true}) {
      ++summary.checks;
      const char* name = skip ? "dualheap_nophase1/stepwise" : "dualheap/stepwise";
      try {
        if (auto err = checked_pipeline(input, k, skip, expected, summary)) fail(name, *err);
      } catch (const std::exception& e) {
        fail(name, e.what());
      }
    }
  }
  return summary;
}

std::string format_summary(const VerifySummary& s) {
  std::ostringstream os;
  os << (s.passed() ? "PASS" : "FAIL") << ": " << s.trials << " trials, " << s.checks << " checks, "
     << s.failures.size() << " failures\n";
  os << "constructions=" << s.constructions << " height_sum_violations=" << s.height_sum_violations
     << " floor_lg_bound_violations=" << s.promotion_bound_violations << " depth_violations=" << s.depth_violations
     << " max_depth=" << s.max_depth_seen << '\n';
  const std::size_t shown = std::min<std::size_t>(s.failures.size(), 20);
  for (std::size_t i = 0; i < shown; ++i) {
    const VerifyFailure& f = s.failures[i];
    os << "  " << f.algo << " seed=" << f.seed << " n=" << f.n << " k=" << f.k << ": " << f.message << '\n';
  }
  if (s.failures.size() > shown) os << "  ... " << (s.failures.size() - shown) << " more\n";
  return os.str();
}

}  // namespace dualheap
