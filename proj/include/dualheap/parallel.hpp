#pragma once

// Level-synchronous parallel execution of the two heap construction phases.
//
// Internal nodes of a heap are processed one tree level at a time, deepest
// level first. Downheap calls on one level touch disjoint subtrees, so a
// level's nodes are split across workers and a barrier separates levels. The
// schedule is a function of (n, ns, nl, workers) only; the output sequence and
// the merged counters are identical to the sequential construction.

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "dualheap/dualheap.hpp"
#include "dualheap/instrumentation.hpp"

namespace dualheap {

enum class HeapSide : std::uint8_t { small, large };

// Nodes [first, last] of one heap, both 1-based and inclusive, processed in
// descending order.
struct NodeRange {
  HeapSide side = HeapSide::large;
  std::size_t first = 0;
  std::size_t last = 0;

  std::size_t size() const { return last - first + 1; }
  friend bool operator==(const NodeRange&, const NodeRange&) = default;
};

struct LevelStep {
  std::vector<std::vector<NodeRange>> per_worker;  // size == workers
  friend bool operator==(const LevelStep&, const LevelStep&) = default;
};

struct ParallelPlan {
  std::size_t workers = 1;
  std::vector<LevelStep> levels;  // execution order
  friend bool operator==(const ParallelPlan&, const ParallelPlan&) = default;
};

// Levels with fewer internal nodes than this multiple of the worker count run
// on worker 0 alone.
inline constexpr std::size_t kMinNodesPerWorker = 4;

class ExecutionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Schedule for the phase-1 min-heap over n elements.
ParallelPlan plan_whole_heap(std::size_t n, std::size_t workers);

// Schedule for the phase-2 split heaps. Small and large levels are paired
// deepest-first and share one barrier step.
ParallelPlan plan_split_heaps(std::size_t ns, std::size_t nl, std::size_t workers);

struct ParallelReport {
  std::vector<std::int64_t> worker_elapsed_ns;
  std::vector<OpCounters> worker_counters;

  // max/min over workers that did any timed work; 1.0 for a single worker.
  double balance_ratio() const;
};

// Counters (if non-null) receive the merged per-worker tallies under the
// phase1 tag.
ParallelReport build_whole_heap_parallel(std::span<Element> data, OpCounters* counters,
                                         const ParallelPlan& plan);

// Counters (if non-null) receive the merged per-worker tallies under the
// phase2 tag.
ParallelReport build_split_heaps_parallel(const DualHeapView& view, OpCounters* counters,
                                          const ParallelPlan& plan);

}  // namespace dualheap
