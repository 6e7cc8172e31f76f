#include "dualheap/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <barrier>
#include <chrono>
#include <string>
#include <system_error>
#include <thread>

namespace dualheap {

namespace {

// Internal-node levels of a heap with m nodes, deepest first. Level d holds
// nodes [2^d, 2^(d+1) - 1] clipped to [1, m/2].
std::vector<NodeRange> internal_levels(HeapSide side, std::size_t m) {
  std::vector<NodeRange> levels;
  const std::size_t last_internal = m / 2;
  if (last_internal == 0) return levels;
  for (std::size_t first = 1; first <= last_internal; first *= 2) {
    levels.push_back({side, first, std::min(2 * first - 1, last_internal)});
  }
  std::reverse(levels.begin(), levels.end());
  return levels;
}

// Splits the concatenation of `ranges` into `workers` contiguous chunks of
// near-equal node count.
LevelStep distribute(const std::vector<NodeRange>& ranges, std::size_t workers) {
  LevelStep step;
  step.per_worker.resize(workers);

  std::size_t total = 0;
  for (const auto& r : ranges) total += r.size();
  if (total < kMinNodesPerWorker * workers) {
    step.per_worker[0] = ranges;
    return step;
  }

  // Walk ranges and cut at chunk boundaries [w*total/workers, (w+1)*total/workers).
  std::size_t r = 0;
  std::size_t consumed = 0;  // nodes of ranges[r] already handed out
  for (std::size_t w = 0; w < workers; ++w) {
    std::size_t want = (w + 1) * total / workers - w * total / workers;
    while (want > 0) {
      const NodeRange& src = ranges[r];
      const std::size_t avail = src.size() - consumed;
      const std::size_t take = std::min(want, avail);
      step.per_worker[w].push_back({src.side, src.first + consumed, src.first + consumed + take - 1});
      want -= take;
      consumed += take;
      if (consumed == src.size()) {
        consumed = 0;
        ++r;
      }
    }
  }
  return step;
}

ParallelPlan make_plan(std::size_t ns, std::size_t nl, std::size_t workers) {
  ParallelPlan plan;
  plan.workers = std::max<std::size_t>(workers, 1);
  const auto small = internal_levels(HeapSide::small, ns);
  const auto large = internal_levels(HeapSide::large, nl);
  const std::size_t steps = std::max(small.size(), large.size());
  for (std::size_t t = 0; t < steps; ++t) {
    std::vector<NodeRange> ranges;
    if (t < small.size()) ranges.push_back(small[t]);
    if (t < large.size()) ranges.push_back(large[t]);
    plan.levels.push_back(distribute(ranges, plan.workers));
  }
  return plan;
}

ParallelReport execute(const DualHeapView& view, OpCounters* counters, const ParallelPlan& plan, Phase phase) {
  const std::size_t workers = plan.workers;
  ParallelReport report;
  report.worker_elapsed_ns.assign(workers, 0);
  report.worker_counters.assign(workers, OpCounters{});

  std::barrier sync(static_cast<std::ptrdiff_t>(workers));
  std::atomic<bool> aborted{false};

  auto body = [&](std::size_t id) {
    Meter<> meter(counters != nullptr ? &report.worker_counters[id] : nullptr, phase);
    for (const LevelStep& level : plan.levels) {
      if (!aborted.load(std::memory_order_relaxed)) {
        const auto start = std::chrono::steady_clock::now();
        for (const NodeRange& range : level.per_worker[id]) {
          for (std::size_t node = range.last; node >= range.first; --node) {
            if (range.side == HeapSide::small) {
              downheap_small(view, meter, node);
            } else {
              downheap_large(view, meter, node);
            }
          }
        }
        report.worker_elapsed_ns[id] +=
            std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - start).count();
      }
      sync.arrive_and_wait();
    }
  };

  std::string failure;
  {
    std::vector<std::jthread> threads;
    threads.reserve(workers - 1);
    for (std::size_t id = 1; id < workers; ++id) {
      try {
        threads.emplace_back(body, id);
      } catch (const std::system_error& e) {
        failure = e.what();
        aborted = true;
        for (std::size_t missing = id; missing < workers; ++missing) sync.arrive_and_drop();
        break;
      }
    }
    body(0);
  }
  if (!failure.empty()) throw ExecutionError("parallel heap construction failed: " + failure);

  if (counters != nullptr) {
    for (const OpCounters& c : report.worker_counters) *counters = merge(*counters, c);
  }
  return report;
}

}  // namespace

ParallelPlan plan_whole_heap(std::size_t n, std::size_t workers) { return make_plan(0, n, workers); }

ParallelPlan plan_split_heaps(std::size_t ns, std::size_t nl, std::size_t workers) {
  return make_plan(ns, nl, workers);
}

double ParallelReport::balance_ratio() const {
  std::int64_t lo = 0;
  std::int64_t hi = 0;
  bool any = false;
  for (std::int64_t t : worker_elapsed_ns) {
    if (t <= 0) continue;
    lo = any ? std::min(lo, t) : t;
    hi = any ? std::max(hi, t) : t;
    any = true;
  }
  return any ? static_cast<double>(hi) / static_cast<double>(lo) : 1.0;
}

ParallelReport build_whole_heap_parallel(std::span<Element> data, OpCounters* counters, const ParallelPlan& plan) {
  return execute(DualHeapView(data, 0), counters, plan, Phase::phase1);
}

ParallelReport build_split_heaps_parallel(const DualHeapView& view, OpCounters* counters, const ParallelPlan& plan) {
  return execute(view, counters, plan, Phase::phase2);
}

}  // namespace dualheap
