#pragma once

// Quickselect baselines and the sort oracle. Counts go to the baseline phase
// tag under the same accounting rules as the dualheap.

#include <cstdint>
#include <span>
#include <string_view>

#include "dualheap/dualheap.hpp"
#include "dualheap/instrumentation.hpp"

namespace dualheap {

enum class PivotRule : std::uint8_t { last_element, median_of_three };

std::string_view pivot_rule_name(PivotRule rule);

struct QuickselectResult {
  Element kth = 0;
  std::size_t ns = 0;  // index holding kth; elements below are <= it, above are >= it
};

// k-th largest by iterative quickselect with a two-pointer partition. The
// pivot is chosen per `rule` and exchanged to the right end of the range
// before scanning.
template <class Less>
QuickselectResult quickselect(std::span<Element> data, std::int64_t k, PivotRule rule, Meter<Less>& meter) {
  const std::size_t target = partition_point(data.size(), k);
  auto swap_slots = [&](std::size_t a, std::size_t b) {
    std::swap(data[a], data[b]);
    meter.move(2);
  };

  std::size_t lo = 0;
  std::size_t hi = data.size() - 1;
  while (lo < hi) {
    std::size_t p = hi;
    if (rule == PivotRule::median_of_three && hi - lo >= 2) {
      const std::size_t mid = lo + (hi - lo) / 2;
      // Index of the median of data[lo], data[mid], data[hi].
      if (meter.less(data[lo], data[mid])) {
        if (meter.less(data[mid], data[hi])) {
          p = mid;
        } else {
          p = meter.less(data[lo], data[hi]) ? hi : lo;
        }
      } else {
        if (meter.less(data[lo], data[hi])) {
          p = lo;
        } else {
          p = meter.less(data[mid], data[hi]) ? hi : mid;
        }
      }
    }
    if (p != hi) swap_slots(p, hi);

    const Element pivot = data[hi];
    std::size_t i = lo;
    std::size_t j = hi;
    for (;;) {
      while (meter.less(data[i], pivot)) ++i;  // stops at hi at the latest
      while (j > lo) {
        --j;
        if (!meter.less(pivot, data[j])) break;
      }
      if (i >= j) break;
      swap_slots(i, j);
      ++i;
    }
    if (i != hi) swap_slots(i, hi);

    if (i == target) break;
    if (i < target) {
      lo = i + 1;
    } else {
      hi = i - 1;
    }
  }
  return {data[target], target};
}

QuickselectResult quickselect(std::span<Element> data, std::int64_t k, PivotRule rule, OpCounters* counters);

// k-th largest by sorting a descending copy. Leaves data untouched.
Element kth_by_sort(std::span<const Element> data, std::int64_t k);

}  // namespace dualheap
