#pragma once

// Dualheap selection: the K-th largest of N elements via two heaps that share
// one contiguous sequence with their roots adjacent at the partition point.
//
//   data: [ small heap, mirrored ....... | large heap ..................... ]
//          S(ns) ...  S(3) S(2) S(1)     | L(1) L(2) L(3) ...  L(nl)
//          index 0                ns-1   | ns                     n-1
//
// The small heap holds the n-k smaller values as a max-heap, the large heap
// the k larger values as a min-heap. Node j is the parent of 2j and 2j+1 on
// both sides. The partition point depends on n and k only.
//
// Three phases:
//   1. bottom-up min-heap over the whole sequence (optional prearrangement);
//   2. bottom-up construction of both split heaps;
//   3. TreeSwap rounds until the small root is no larger than the large root.

#include <bit>
#include <cassert>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>

#include "dualheap/instrumentation.hpp"

namespace dualheap {

class SelectionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidK : public SelectionError {
 public:
  InvalidK(std::int64_t k, std::size_t n);
};

// Phase 3 ran more top-level TreeSwap rounds than allowed.
class CapExceeded : public SelectionError {
 public:
  CapExceeded(std::uint64_t cap, std::size_t n, std::size_t k);
  std::uint64_t cap() const { return cap_; }

 private:
  std::uint64_t cap_;
};

inline std::uint64_t ceil_log2(std::uint64_t n) { return n <= 1 ? 0 : std::bit_width(n - 1); }
inline std::uint64_t floor_log2(std::uint64_t n) { return n == 0 ? 0 : std::bit_width(n) - 1; }

// Largest TreeSwap recursion depth the exchange phase may reach on n elements.
inline std::uint64_t treeswap_depth_limit(std::size_t n) { return 2 * ceil_log2(n) + 2; }

// Default cap on top-level TreeSwap rounds: 64*ceil(lg n) + 64.
inline std::uint64_t default_treeswap_cap(std::size_t n) { return 64 * ceil_log2(n) + 64; }

struct SelectOptions {
  bool skip_phase1 = false;
  std::optional<std::uint64_t> treeswap_cap;  // unset: default_treeswap_cap(n)
  std::size_t parallel_workers = 1;
};

class DualHeapView {
 public:
  DualHeapView(std::span<Element> data, std::size_t ns) : data_(data), ns_(ns) {
    assert(ns <= data.size());
  }

  std::size_t size() const { return data_.size(); }
  std::size_t ns() const { return ns_; }
  std::size_t nl() const { return data_.size() - ns_; }
  std::span<Element> data() const { return data_; }

  // 1-based node accessors.
  Element& small(std::size_t k) const {
    assert(k >= 1 && k <= ns_);
    return data_[ns_ - k];
  }
  Element& large(std::size_t k) const {
    assert(k >= 1 && k <= nl());
    return data_[ns_ + k - 1];
  }

 private:
  std::span<Element> data_;
  std::size_t ns_;
};

// Sift the value at small node k down its greedy path (larger child).
template <class Less>
void downheap_small(const DualHeapView& view, Meter<Less>& meter, std::size_t k) {
  const std::size_t ns = view.ns();
  assert(k >= 1 && k <= ns);
  if (k > ns / 2) return;

  const Element held = view.small(k);
  bool moved = false;
  for (;;) {
    std::size_t j = 2 * k;
    if (j < ns && meter.less(view.small(j), view.small(j + 1))) ++j;
    if (!meter.less(held, view.small(j))) break;
    view.small(k) = view.small(j);
    meter.move();
    meter.promotion();
    moved = true;
    k = j;
    if (j > ns / 2) break;
  }
  if (moved) {
    view.small(k) = held;
    meter.move();
  }
}

// Sift the value at large node k down its greedy path (smaller child).
template <class Less>
void downheap_large(const DualHeapView& view, Meter<Less>& meter, std::size_t k) {
  const std::size_t nl = view.nl();
  assert(k >= 1 && k <= nl);
  if (k > nl / 2) return;

  const Element held = view.large(k);
  bool moved = false;
  for (;;) {
    std::size_t j = 2 * k;
    if (j < nl && meter.less(view.large(j + 1), view.large(j))) ++j;
    if (!meter.less(view.large(j), held)) break;
    view.large(k) = view.large(j);
    meter.move();
    meter.promotion();
    moved = true;
    k = j;
    if (j > nl / 2) break;
  }
  if (moved) {
    view.large(k) = held;
    meter.move();
  }
}

template <class Less>
void build_small_heap(const DualHeapView& view, Meter<Less>& meter) {
  for (std::size_t i = view.ns() / 2; i > 0; --i) downheap_small(view, meter, i);
}

template <class Less>
void build_large_heap(const DualHeapView& view, Meter<Less>& meter) {
  for (std::size_t i = view.nl() / 2; i > 0; --i) downheap_large(view, meter, i);
}

// Phase 1: min-heap over all of data with node k at data[k-1], so smaller
// values settle toward the low (small-heap) end.
template <class Less>
void build_whole_heap(std::span<Element> data, Meter<Less>& meter) {
  if (data.size() < 2) return;
  build_large_heap(DualHeapView(data, 0), meter);
}

// Phase 2.
template <class Less>
void build_split_heaps(const DualHeapView& view, Meter<Less>& meter) {
  build_small_heap(view, meter);
  build_large_heap(view, meter);
}

// Post-order exchange between small node ks and large node kl: greedy
// subtree, then the sibling subtree, then the node pair itself.
// Requires small(ks) > large(kl) and both subtrees heap-ordered.
template <class Less>
void tree_swap(const DualHeapView& view, Meter<Less>& meter, std::size_t ks, std::size_t kl,
               std::uint64_t depth = 1) {
  assert(depth <= treeswap_depth_limit(view.size()));
  meter.treeswap_enter();

  const std::size_t ns = view.ns();
  const std::size_t nl = view.nl();
  std::size_t js = 2 * ks;
  std::size_t jl = 2 * kl;
  if (js <= ns && jl <= nl) {
    if (js < ns && meter.less(view.small(js), view.small(js + 1))) ++js;
    if (jl < nl && meter.less(view.large(jl + 1), view.large(jl))) ++jl;
    if (meter.less(view.large(jl), view.small(js))) {
      tree_swap(view, meter, js, jl, depth + 1);
      const std::size_t ss = js ^ 1;
      const std::size_t sl = jl ^ 1;
      if (ss <= ns && sl <= nl && meter.less(view.large(sl), view.small(ss))) {
        tree_swap(view, meter, ss, sl, depth + 1);
      }
    }
  }

  const Element tmp = view.small(ks);
  view.small(ks) = view.large(kl);
  view.large(kl) = tmp;
  meter.move(2);
  meter.transfer(2);
  downheap_small(view, meter, ks);
  downheap_large(view, meter, kl);

  meter.treeswap_exit();
}

// Phase 3. Throws CapExceeded when more than `cap` top-level rounds are needed.
template <class Less>
void exchange_phase(const DualHeapView& view, Meter<Less>& meter, std::uint64_t cap) {
  if (view.ns() == 0 || view.nl() == 0) return;
  std::uint64_t rounds = 0;
  while (meter.less(view.large(1), view.small(1))) {
    if (++rounds > cap) throw CapExceeded(cap, view.size(), view.nl());
    meter.treeswap_round();
    tree_swap(view, meter, 1, 1);
  }
}

// Validates k against n and returns ns = n - k.
std::size_t partition_point(std::size_t n, std::int64_t k);

// All three phases with an arbitrary comparator, sequentially. Returns the
// value at the partition point.
template <class Less>
Element run_dualheap(std::span<Element> data, std::int64_t k, Meter<Less>& meter,
                     const SelectOptions& opts = {}) {
  const std::size_t ns = partition_point(data.size(), k);
  const std::uint64_t cap = opts.treeswap_cap.value_or(default_treeswap_cap(data.size()));
  if (!opts.skip_phase1) {
    meter.set_phase(Phase::phase1);
    build_whole_heap(data, meter);
  }
  const DualHeapView view(data, ns);
  meter.set_phase(Phase::phase2);
  build_split_heaps(view, meter);
  meter.set_phase(Phase::phase3);
  exchange_phase(view, meter, cap);
  return data[ns];
}

struct SelectResult {
  Element kth = 0;
  std::size_t ns = 0;
  OpCounters counters;
};

// Finds the k-th largest element of data (k = 1 is the maximum), leaving
// data partitioned at ns = n - k: everything below index ns is <= the
// result, everything from ns on is >= it. Honors opts.parallel_workers for
// phases 1 and 2.
SelectResult dualheap_select(std::span<Element> data, std::int64_t k, const SelectOptions& opts = {});

struct PartitionReport {
  bool ok = true;
  std::optional<std::size_t> first_violation;
  std::string message;
};

// Checks data[i] <= data[ns] for i < ns, data[i] >= data[ns] for i >= ns, and
// data[ns] == expected_kth.
PartitionReport verify_partition(std::span<const Element> data, std::size_t ns, Element expected_kth);

}  // namespace dualheap
