#include "dualheap/baselines.hpp"

#include <algorithm>
#include <functional>
#include <vector>

namespace dualheap {

std::string_view pivot_rule_name(PivotRule rule) {
  return rule == PivotRule::last_element ? "last_element" : "median_of_three";
}

QuickselectResult quickselect(std::span<Element> data, std::int64_t k, PivotRule rule, OpCounters* counters) {
  Meter<> meter(counters, Phase::baseline);
  return quickselect(data, k, rule, meter);
}

Element kth_by_sort(std::span<const Element> data, std::int64_t k) {
  partition_point(data.size(), k);
  std::vector<Element> copy(data.begin(), data.end());
  std::sort(copy.begin(), copy.end(), std::greater<>{});
  return copy[static_cast<std::size_t>(k - 1)];
}

}  // namespace dualheap
