#include "dualheap/dualheap.hpp"

#include <sstream>

#include "dualheap/parallel.hpp"

namespace dualheap {

namespace {

std::string invalid_k_message(std::int64_t k, std::size_t n) {
  std::ostringstream os;
  os << "k must be in [1, " << n << "], got " << k;
  return os.str();
}

std::string cap_message(std::uint64_t cap, std::size_t n, std::size_t k) {
  std::ostringstream os;
  os << "exchange phase exceeded " << cap << " TreeSwap rounds (n=" << n << ", k=" << k << ")";
  return os.str();
}

}  // namespace

InvalidK::InvalidK(std::int64_t k, std::size_t n) : SelectionError(invalid_k_message(k, n)) {}

CapExceeded::CapExceeded(std::uint64_t cap, std::size_t n, std::size_t k)
    : SelectionError(cap_message(cap, n, k)), cap_(cap) {}

std::size_t partition_point(std::size_t n, std::int64_t k) {
  if (k < 1 || static_cast<std::uint64_t>(k) > n) throw InvalidK(k, n);
  return n - static_cast<std::size_t>(k);
}

SelectResult dualheap_select(std::span<Element> data, std::int64_t k, const SelectOptions& opts) {
  SelectResult result;
  if (opts.parallel_workers <= 1) {
    Meter<> meter(&result.counters);
    result.kth = run_dualheap(data, k, meter, opts);
    result.ns = data.size() - static_cast<std::size_t>(k);
    return result;
  }

  const std::size_t ns = partition_point(data.size(), k);
  const std::uint64_t cap = opts.treeswap_cap.value_or(default_treeswap_cap(data.size()));
  if (!opts.skip_phase1) {
    build_whole_heap_parallel(data, &result.counters, plan_whole_heap(data.size(), opts.parallel_workers));
  }
  const DualHeapView view(data, ns);
  build_split_heaps_parallel(view, &result.counters, plan_split_heaps(ns, view.nl(), opts.parallel_workers));
  Meter<> meter(&result.counters, Phase::phase3);
  exchange_phase(view, meter, cap);
  result.kth = data[ns];
  result.ns = ns;
  return result;
}

PartitionReport verify_partition(std::span<const Element> data, std::size_t ns, Element expected_kth) {
  PartitionReport report;
  auto fail = [&](std::size_t index, const std::string& what) {
    report.ok = false;
    report.first_violation = index;
    report.message = what;
    return report;
  };

  if (ns >= data.size()) {
    std::ostringstream os;
    os << "partition point " << ns << " outside sequence of length " << data.size();
    return fail(ns, os.str());
  }
  const Element pivot = data[ns];
  for (std::size_t i = 0; i < data.size(); ++i) {
    const bool bad = i < ns ? data[i] > pivot : data[i] < pivot;
    if (bad) {
      std::ostringstream os;
      os << "data[" << i << "]=" << data[i] << (i < ns ? " > " : " < ") << "data[" << ns << "]=" << pivot;
      return fail(i, os.str());
    }
  }
  if (pivot != expected_kth) {
    std::ostringstream os;
    os << "data[" << ns << "]=" << pivot << " but expected " << expected_kth;
    return fail(ns, os.str());
  }
  return report;
}

}  // namespace dualheap
