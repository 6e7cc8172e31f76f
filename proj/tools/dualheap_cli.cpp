// dualheap: command-line front end for selection runs, benchmark sweeps and
// oracle verification.
//
// Exit codes: 0 success, 1 verification failure, 2 usage error,
// 3 exchange phase exceeded its TreeSwap cap.

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "dualheap/dualheap.hpp"
#include "dualheap/harness.hpp"

namespace {

constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitCap = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<dualheap::Element> read_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open input file " + path);
  std::vector<dualheap::Element> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    std::istringstream is(line);
    dualheap::Element v = 0;
    std::string rest;
    if (!(is >> v) || (is >> rest)) {
      throw UsageError(path + ":" + std::to_string(line_no) + ": not a 64-bit integer: " + line);
    }
    out.push_back(v);
  }
  return out;
}

std::vector<dualheap::Algorithm> parse_algorithms(const std::vector<std::string>& names) {
  std::vector<dualheap::Algorithm> out;
  for (const auto& name : names) {
    if (name == "all") {
      for (auto a : dualheap::all_algorithms()) out.push_back(a);
      continue;
    }
    auto algo = dualheap::parse_algorithm(name);
    if (!algo) throw UsageError("unknown algorithm '" + name + "'");
    out.push_back(*algo);
  }
  return out;
}

struct SelectArgs {
  std::size_t n = 0;
  std::int64_t k = 0;
  std::uint64_t seed = 1;
  std::string input;
  bool skip_phase1 = false;
  std::size_t parallel = 1;
  std::optional<std::uint64_t> cap;
};

int run_select(const SelectArgs& args) {
  std::vector<dualheap::Element> data;
  if (!args.input.empty()) {
    data = read_input(args.input);
  } else {
    if (args.n < 1) throw UsageError("--n is required (or --input)");
    data = dualheap::generate_case(args.seed, args.n);
  }
  if (data.empty()) throw UsageError("input is empty");

  dualheap::SelectOptions opts;
  opts.skip_phase1 = args.skip_phase1;
  opts.parallel_workers = args.parallel;
  opts.treeswap_cap = args.cap;
  const dualheap::SelectResult r = dualheap::dualheap_select(data, args.k, opts);
  const auto& c = r.counters;
  std::cout << "kth=" << r.kth << '\n';
  std::cout << "n=" << data.size() << " k=" << args.k << " comparisons=" << c.total_comparisons()
            << " moves=" << c.total_moves() << " promotions=" << c.total_promotions()
            << " treeswaps_toplevel=" << c.treeswaps_toplevel << " treeswaps_recursive=" << c.treeswaps_recursive
            << " max_treeswap_depth=" << c.max_treeswap_depth << " transfers=" << c.transfers << '\n';
  return 0;
}

struct BenchArgs {
  std::vector<std::size_t> n_list;
  std::size_t trials = 100;
  std::uint64_t seed = 1;
  std::vector<std::string> algos{"all"};
  std::size_t parallel = 1;
  std::optional<std::int64_t> k;
  std::optional<std::uint64_t> cap;
  bool timing = false;
  std::string out;
};

int run_bench(const BenchArgs& args) {
  dualheap::ExperimentConfig config;
  config.n_values = args.n_list;
  config.trials_per_n = args.trials;
  config.base_seed = args.seed;
  config.algorithms = parse_algorithms(args.algos);
  config.workers = args.parallel;
  config.explicit_k = args.k;
  config.treeswap_cap = args.cap;
  config.record_timing = args.timing;
  try {
    config.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const auto records = dualheap::run_trials(config);
  dualheap::write_csv(records, std::filesystem::path(args.out));
  std::cout << "wrote " << records.size() << " records to " << args.out << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dualheap selection: select, benchmark and verify"};
  app.require_subcommand(1);

  SelectArgs sel;
  auto* select_cmd = app.add_subcommand("select", "Find the k-th largest element of one input");
  select_cmd->add_option("--n", sel.n, "Number of generated elements")->check(CLI::PositiveNumber);
  select_cmd->add_option("--k", sel.k, "Rank to select (1 = largest)")->required();
  select_cmd->add_option("--seed", sel.seed, "Generator seed");
  select_cmd->add_option("--input", sel.input, "Newline-delimited integers; overrides --n/--seed");
  select_cmd->add_flag("--skip-phase1", sel.skip_phase1, "Skip the whole-heap prearrangement");
  select_cmd->add_option("--parallel", sel.parallel, "Workers for heap construction")->check(CLI::PositiveNumber);
  select_cmd->add_option("--treeswap-cap", sel.cap, "Maximum top-level TreeSwap rounds")->check(CLI::PositiveNumber);

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Run a benchmark sweep and write CSV");
  bench_cmd->add_option("--n-list", bench.n_list, "Comma-separated sizes")->required()->delimiter(',');
  bench_cmd->add_option("--trials", bench.trials, "Trials per size")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--seed", bench.seed, "Base seed");
  bench_cmd->add_option("--algos", bench.algos, "Comma-separated algorithms or 'all'")->delimiter(',');
  bench_cmd->add_option("--parallel", bench.parallel, "Workers for heap construction")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--k", bench.k, "Explicit k (default: n/2, at least 1)");
  bench_cmd->add_option("--treeswap-cap", bench.cap, "Maximum top-level TreeSwap rounds")->check(CLI::PositiveNumber);
  bench_cmd->add_flag("--timing", bench.timing, "Record wall-clock elapsed_ns (output no longer reproducible)");
  bench_cmd->add_option("--out", bench.out, "Output CSV path")->required();

  std::size_t verify_trials = 1000;
  std::size_t verify_max_n = 2000;
  std::uint64_t verify_seed = 1;
  auto* verify_cmd = app.add_subcommand("verify", "Cross-check every algorithm against the sort oracle");
  verify_cmd->add_option("--trials", verify_trials, "Number of random cases")->check(CLI::PositiveNumber);
  verify_cmd->add_option("--max-n", verify_max_n, "Largest case size")->check(CLI::PositiveNumber);
  verify_cmd->add_option("--seed", verify_seed, "Seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*select_cmd) return run_select(sel);
    if (*bench_cmd) return run_bench(bench);
    if (*verify_cmd) {
      const auto summary = dualheap::verify_run(verify_trials, verify_max_n, verify_seed);
      std::cout << dualheap::format_summary(summary);
      return summary.passed() ? 0 : kExitVerifyFailed;
    }
  } catch (const dualheap::CapExceeded& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitCap;
  } catch (const dualheap::InvalidK& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return kExitUsage;
}
