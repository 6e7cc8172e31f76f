#include "dualheap/instrumentation.hpp"

#include <algorithm>
#include <numeric>

namespace dualheap {

std::string_view phase_name(Phase phase) {
  switch (phase) {
    case Phase::phase1:
      return "phase1";
    case Phase::phase2:
      return "phase2";
    case Phase::phase3:
      return "phase3";
    case Phase::baseline:
      return "baseline";
  }
  return "unknown";
}

namespace {

std::uint64_t sum(const OpCounters::PerPhase& v) {
  return std::accumulate(v.begin(), v.end(), std::uint64_t{0});
}

OpCounters::PerPhase add(const OpCounters::PerPhase& a, const OpCounters::PerPhase& b) {
  OpCounters::PerPhase out{};
  std::transform(a.begin(), a.end(), b.begin(), out.begin(), std::plus<>{});
  return out;
}

}  // namespace

std::uint64_t OpCounters::total_comparisons() const { return sum(comparisons); }
std::uint64_t OpCounters::total_moves() const { return sum(moves); }
std::uint64_t OpCounters::total_promotions() const { return sum(promotions); }

OpCounters merge(const OpCounters& a, const OpCounters& b) {
  OpCounters out;
  out.comparisons = add(a.comparisons, b.comparisons);
  out.moves = add(a.moves, b.moves);
  out.promotions = add(a.promotions, b.promotions);
  out.treeswaps_toplevel = a.treeswaps_toplevel + b.treeswaps_toplevel;
  out.treeswaps_recursive = a.treeswaps_recursive + b.treeswaps_recursive;
  out.max_treeswap_depth = std::max(a.max_treeswap_depth, b.max_treeswap_depth);
  out.transfers = a.transfers + b.transfers;
  out.current_depth = a.current_depth + b.current_depth;
  return out;
}

}  // namespace dualheap
