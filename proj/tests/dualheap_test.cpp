#include <doctest.h>

#include <algorithm>
#include <bit>
#include <numeric>
#include <random>
#include <vector>

#include "dualheap/baselines.hpp"
#include "dualheap/dualheap.hpp"
#include "oracles.hpp"

using namespace dualheap;

namespace {

std::uint64_t height_sum(std::uint64_t m) { return m - static_cast<std::uint64_t>(std::popcount(m)); }

std::uint64_t listed_bound(std::uint64_t m) { return m - floor_log2(m) - 1; }

// Random max-heap of size m in node order, then overwrite node k.
std::vector<Element> heap_with_loose_node(std::mt19937_64& gen, std::size_t m, std::size_t k, bool max_heap) {
  auto nodes = oracle::random_values(gen, m, gen() % 2 ? 8 : 1000);
  for (std::size_t i = m / 2; i-- > 0;) {
    if (max_heap) {
      oracle::sift_down_max(nodes, i);
    } else {
      oracle::sift_down_min(nodes, i);
    }
  }
  nodes[k - 1] = static_cast<Element>(gen() % 1000);
  return nodes;
}

}  // namespace

TEST_SUITE("downheap") {
  TEST_CASE("small.single_forced_promotion") {
    std::vector<Element> data{1, 5, 2};  // nodes (2,5,1)
    OpCounters c;
    Meter<> m(&c);
    downheap_small(DualHeapView(data, 3), m, 1);
    CHECK(data == std::vector<Element>{1, 2, 5});  // nodes (5,2,1)
    CHECK(oracle::small_nodes(data, 3) == std::vector<Element>{5, 2, 1});
    CHECK(c.total_promotions() == 1);
    CHECK(c.total_moves() == 2);
  }

  TEST_CASE("small.childless_node_is_untouched") {
    std::vector<Element> data{1, 5, 2};
    OpCounters c;
    Meter<> m(&c);
    downheap_small(DualHeapView(data, 3), m, 2);
    CHECK(data == std::vector<Element>{1, 5, 2});
    CHECK(c.total_comparisons() == 0);
  }

  TEST_CASE("large.single_forced_promotion") {
    std::vector<Element> data{0, 0, 9, 4, 7};
    Meter<> m;
    downheap_large(DualHeapView(data, 2), m, 1);
    CHECK(oracle::large_nodes(data, 2) == std::vector<Element>{4, 9, 7});
  }

  TEST_CASE("large.single_node_is_noop") {
    std::vector<Element> data{3, 1};
    OpCounters c;
    Meter<> m(&c);
    downheap_large(DualHeapView(data, 1), m, 1);
    CHECK(data == std::vector<Element>{3, 1});
    CHECK(c.total_comparisons() == 0);
  }

  TEST_CASE("lone_child_at_heap_end") {
    // ns = 2: node 1 has only node 2, which sits at data[0].
    std::vector<Element> data{7, 3, 100};
    Meter<> m;
    downheap_small(DualHeapView(data, 2), m, 1);
    CHECK(oracle::small_nodes(data, 2) == std::vector<Element>{7, 3});
  }

  TEST_CASE("small.matches_reference_sift_down") {
    std::mt19937_64 gen(101);
    for (int trial = 0; trial < 1000; ++trial) {
      const std::size_t ns = 1 + gen() % 64;
      const std::size_t nl = 1 + gen() % 8;
      const std::size_t k = 1 + gen() % ns;
      auto expected = heap_with_loose_node(gen, ns, k, true);

      std::vector<Element> data(ns + nl, -1);
      for (std::size_t j = 1; j <= ns; ++j) data[ns - j] = expected[j - 1];
      OpCounters c;
      Meter<> m(&c);
      downheap_small(DualHeapView(data, ns), m, k);
      oracle::sift_down_max(expected, k - 1);

      REQUIRE(oracle::small_nodes(data, ns) == expected);
      CHECK(std::all_of(data.begin() + static_cast<std::ptrdiff_t>(ns), data.end(), [](Element v) { return v == -1; }));
      CHECK(c.total_comparisons() <= 2 * (c.total_promotions() + 1));
      CHECK(c.total_promotions() <= floor_log2(ns) - floor_log2(k));
    }
  }

  TEST_CASE("large.matches_reference_sift_down") {
    std::mt19937_64 gen(202);
    for (int trial = 0; trial < 1000; ++trial) {
      const std::size_t ns = gen() % 8;
      const std::size_t nl = 1 + gen() % 64;
      const std::size_t k = 1 + gen() % nl;
      auto expected = heap_with_loose_node(gen, nl, k, false);

      std::vector<Element> data(ns, -1);
      data.insert(data.end(), expected.begin(), expected.end());
      OpCounters c;
      Meter<> m(&c);
      downheap_large(DualHeapView(data, ns), m, k);
      oracle::sift_down_min(expected, k - 1);

      REQUIRE(oracle::large_nodes(data, ns) == expected);
      CHECK(c.total_comparisons() <= 2 * (c.total_promotions() + 1));
    }
  }
}

TEST_SUITE("build_whole_heap") {
  TEST_CASE("empty_and_singleton_do_nothing") {
    for (std::vector<Element> data : {std::vector<Element>{}, std::vector<Element>{42}}) {
      const auto before = data;
      OpCounters c;
      Meter<> m(&c);
      build_whole_heap(data, m);
      CHECK(data == before);
      CHECK(c == OpCounters{});
    }
  }

  TEST_CASE("seven_elements_every_permutation_within_listed_bound") {
    std::vector<Element> perm{1, 2, 3, 4, 5, 6, 7};
    std::uint64_t worst = 0;
    do {
      std::vector<Element> data = perm;
      OpCounters c;
      Meter<> m(&c);
      build_whole_heap(data, m);
      REQUIRE(oracle::is_min_heap(data));
      worst = std::max(worst, c.total_promotions());
    } while (std::next_permutation(perm.begin(), perm.end()));
    CHECK(worst <= 7 - 2 - 1);
    CHECK(worst == 4);
  }

  TEST_CASE("exhaustive_worst_case_equals_height_sum") {
    for (std::size_t m = 1; m <= 8; ++m) {
      std::vector<Element> perm(m);
      std::iota(perm.begin(), perm.end(), 1);
      std::uint64_t worst = 0;
      do {
        std::vector<Element> data = perm;
        OpCounters c;
        Meter<> meter(&c);
        build_whole_heap(data, meter);
        worst = std::max(worst, c.total_promotions());
      } while (std::next_permutation(perm.begin(), perm.end()));
      CAPTURE(m);
      CHECK(worst == height_sum(m));
    }
  }

  TEST_CASE("random_inputs_are_min_heaps") {
    std::mt19937_64 gen(303);
    for (int trial = 0; trial < 500; ++trial) {
      const std::size_t n = gen() % 513;
      auto data = oracle::random_values(gen, n, trial % 4 == 0 ? 3 : 1 << 30);
      const auto before = oracle::sorted(data);
      OpCounters c;
      Meter<> m(&c);
      build_whole_heap(data, m);
      REQUIRE(oracle::is_min_heap(data));
      CHECK(oracle::sorted(data) == before);
      if (n >= 1) CHECK(c.total_promotions() <= height_sum(n));
    }
  }

  TEST_CASE("listed_bound_holds_on_perfect_trees") {
    std::mt19937_64 gen(404);
    for (int h = 1; h <= 10; ++h) {
      const std::size_t m = (std::size_t{1} << h) - 1;
      CHECK(listed_bound(m) == height_sum(m));
      for (int trial = 0; trial < 50; ++trial) {
        auto data = oracle::random_values(gen, m, 1 << 30);
        OpCounters c;
        Meter<> meter(&c);
        build_whole_heap(data, meter);
        CHECK(c.total_promotions() <= listed_bound(m));
      }
      // Descending input drives every value to the bottom.
      std::vector<Element> data(m);
      std::iota(data.rbegin(), data.rend(), 0);
      OpCounters c;
      Meter<> meter(&c);
      build_whole_heap(data, meter);
      CHECK(c.total_promotions() == listed_bound(m));
    }
  }

  TEST_CASE("two_nodes_can_need_one_promotion") {
    std::vector<Element> data{2, 1};
    OpCounters c;
    Meter<> m(&c);
    build_whole_heap(data, m);
    CHECK(c.total_promotions() == 1);
    CHECK(c.total_promotions() == height_sum(2));
  }
}

TEST_SUITE("build_split_heaps") {
  TEST_CASE("empty_small_side_builds_whole_min_heap") {
    std::vector<Element> data{5, 3, 8, 1, 9, 2};
    Meter<> m;
    build_split_heaps(DualHeapView(data, 0), m);
    CHECK(oracle::is_min_heap(data));
  }

  TEST_CASE("already_valid_input_is_unchanged") {
    std::vector<Element> data{1, 2, 3, 4};
    OpCounters c;
    Meter<> m(&c);
    build_split_heaps(DualHeapView(data, 2), m);
    CHECK(data == std::vector<Element>{1, 2, 3, 4});
    CHECK(c.total_moves() == 0);
  }

  TEST_CASE("random_views_satisfy_both_heap_conditions") {
    std::mt19937_64 gen(505);
    for (int trial = 0; trial < 500; ++trial) {
      const std::size_t n = 1 + gen() % 512;
      for (std::size_t ns : {std::size_t{0}, n / 2, static_cast<std::size_t>(gen() % n), n - 1}) {
        auto data = oracle::random_values(gen, n, trial % 3 == 0 ? 4 : 1 << 30);
        const auto before = oracle::sorted(data);
        OpCounters c;
        Meter<> m(&c);
        const DualHeapView view(data, ns);
        const std::uint64_t p0 = c.total_promotions();
        build_small_heap(view, m);
        const std::uint64_t p1 = c.total_promotions();
        build_large_heap(view, m);
        const std::uint64_t p2 = c.total_promotions();
        REQUIRE(oracle::is_max_heap(oracle::small_nodes(data, ns)));
        REQUIRE(oracle::is_min_heap(oracle::large_nodes(data, ns)));
        CHECK(oracle::sorted(data) == before);
        CHECK(p1 - p0 <= height_sum(ns));
        CHECK(p2 - p1 <= height_sum(n - ns));
      }
    }
  }
}

TEST_SUITE("tree_swap") {
  TEST_CASE("childless_roots_swap_unconditionally") {
    std::vector<Element> data{9, 4};
    OpCounters c;
    Meter<> m(&c, Phase::phase3);
    tree_swap(DualHeapView(data, 1), m, 1, 1);
    CHECK(data == std::vector<Element>{4, 9});
    CHECK(c.treeswaps_recursive == 1);
    CHECK(c.max_treeswap_depth == 1);
    CHECK(c.transfers == 2);
  }

  // small nodes (8,3,2), large nodes (1,7,9). Greedy children 3 and 7 do not
  // overlap, so only the roots swap: small (1,3,2) -> downheap -> (3,1,2);
  // large (8,7,9) -> downheap -> (7,8,9).
  TEST_CASE("roots_only_exchange") {
    std::vector<Element> data{2, 3, 8, 1, 7, 9};
    std::vector<Element> reference = data;
    OpCounters c;
    Meter<> m(&c, Phase::phase3);
    tree_swap(DualHeapView(data, 3), m, 1, 1);
    CHECK(oracle::small_nodes(data, 3) == std::vector<Element>{3, 1, 2});
    CHECK(oracle::large_nodes(data, 3) == std::vector<Element>{7, 8, 9});
    CHECK(c.treeswaps_recursive == 1);
    CHECK(c.max_treeswap_depth == 1);

    oracle::PointerReference ref(reference, 3);
    ref.TreeSwap(1, 1, 1);
    CHECK(reference == data);
  }

  TEST_CASE("recursion_visits_greedy_then_sibling") {
    // small nodes (9,8,7), large nodes (1,2,3): every pair overlaps.
    std::vector<Element> data{7, 8, 9, 1, 2, 3};
    std::vector<Element> reference = data;
    OpCounters c;
    Meter<> m(&c, Phase::phase3);
    tree_swap(DualHeapView(data, 3), m, 1, 1);
    oracle::PointerReference ref(reference, 3);
    ref.TreeSwap(1, 1, 1);
    CHECK(data == reference);
    CHECK(c.treeswaps_recursive == 3);
    CHECK(c.max_treeswap_depth == 2);
    CHECK(oracle::small_nodes(data, 3) == std::vector<Element>{3, 2, 1});
    CHECK(oracle::large_nodes(data, 3) == std::vector<Element>{7, 8, 9});
  }
}

TEST_SUITE("exchange_phase") {
  TEST_CASE("separated_input_needs_no_rounds") {
    for (std::size_t ns = 0; ns < 10; ++ns) {
      std::vector<Element> data(10);
      std::iota(data.begin(), data.end(), 0);
      OpCounters c;
      Meter<> m(&c, Phase::phase3);
      const DualHeapView view(data, ns);
      build_split_heaps(view, m);
      exchange_phase(view, m, 1);
      CHECK(c.treeswaps_toplevel == 0);
    }
  }

  TEST_CASE("ten_thousand_split_in_half_needs_few_rounds") {
    std::vector<std::uint64_t> rounds;
    std::mt19937_64 gen(606);
    for (int trial = 0; trial < 21; ++trial) {
      auto data = oracle::random_values(gen, 10000, std::int64_t{1} << 31);
      const SelectResult r = dualheap_select(data, 5000);
      rounds.push_back(r.counters.treeswaps_toplevel);
    }
    std::nth_element(rounds.begin(), rounds.begin() + 10, rounds.end());
    CHECK(rounds[10] < 10);
  }

  TEST_CASE("random_views_partition_and_stay_heaps") {
    std::mt19937_64 gen(707);
    for (int trial = 0; trial < 1000; ++trial) {
      const std::size_t n = 1 + gen() % 2000;
      const std::size_t ns = gen() % n;
      auto data = oracle::random_values(gen, n, trial % 5 == 0 ? 6 : 1 << 30);
      const auto sorted = oracle::sorted(data);
      OpCounters c;
      Meter<> m(&c);
      const DualHeapView view(data, ns);
      build_split_heaps(view, m);
      m.set_phase(Phase::phase3);
      exchange_phase(view, m, default_treeswap_cap(n));

      REQUIRE(data[ns] == sorted[ns]);
      REQUIRE(verify_partition(data, ns, sorted[ns]).ok);
      CHECK(oracle::is_max_heap(oracle::small_nodes(data, ns)));
      CHECK(oracle::is_min_heap(oracle::large_nodes(data, ns)));
      CHECK(oracle::sorted(data) == sorted);
      CHECK(c.max_treeswap_depth <= treeswap_depth_limit(n));

      // idempotent
      OpCounters again;
      Meter<> m2(&again, Phase::phase3);
      const auto snapshot = data;
      exchange_phase(view, m2, 1);
      CHECK(again.treeswaps_toplevel == 0);
      CHECK(data == snapshot);
    }
  }

  TEST_CASE("cap_exceeded_is_reported") {
    std::mt19937_64 gen(808);
    auto data = oracle::random_values(gen, 10000, 1 << 30);
    SelectOptions opts;
    opts.treeswap_cap = 1;
    CHECK_THROWS_AS(dualheap_select(data, 5000, opts), CapExceeded);
  }
}

TEST_SUITE("dualheap_select") {
  TEST_CASE("singleton") {
    std::vector<Element> data{5};
    CHECK(dualheap_select(data, 1).kth == 5);
  }

  TEST_CASE("kth_of_one_to_hundred") {
    std::vector<Element> data(100);
    std::iota(data.begin(), data.end(), 1);
    std::shuffle(data.begin(), data.end(), std::mt19937_64(3));
    const SelectResult r = dualheap_select(data, 50);
    CHECK(r.kth == 51);
    CHECK(r.ns == 50);
    CHECK(verify_partition(data, 50, 51).ok);
  }

  TEST_CASE("invalid_k") {
    std::vector<Element> data{1, 2, 3};
    CHECK_THROWS_AS(dualheap_select(data, 0), InvalidK);
    CHECK_THROWS_AS(dualheap_select(data, 4), InvalidK);
    CHECK_THROWS_AS(dualheap_select(data, -1), InvalidK);
    std::vector<Element> empty;
    CHECK_THROWS_AS(dualheap_select(empty, 1), InvalidK);
  }

  TEST_CASE("extreme_k") {
    std::vector<Element> data{4, 9, 1, 7, 3};
    auto copy = data;
    CHECK(dualheap_select(copy, 5).kth == 1);  // ns = 0
    copy = data;
    CHECK(dualheap_select(copy, 1).kth == 9);
  }

  TEST_CASE("matches_sort_oracle") {
    std::mt19937_64 gen(909);
    for (int trial = 0; trial < 1000; ++trial) {
      const std::size_t n = 1 + gen() % 2000;
      const auto k = static_cast<std::int64_t>(1 + gen() % n);
      const Element bound = trial % 4 == 0 ? 3 : (std::int64_t{1} << 40);
      auto data = oracle::random_values(gen, n, bound);
      for (auto& v : data) v -= bound / 2;  // negatives too
      const auto input = data;
      SelectOptions opts;
      opts.skip_phase1 = trial % 2 == 1;
      const SelectResult r = dualheap_select(data, k, opts);
      const Element expected = kth_by_sort(input, k);
      REQUIRE(r.kth == expected);
      REQUIRE(verify_partition(data, r.ns, expected).ok);
      CHECK(oracle::sorted(data) == oracle::sorted(input));
      CHECK(r.counters.max_treeswap_depth <= treeswap_depth_limit(n));
    }
  }

  TEST_CASE("bit_identical_to_pointer_reference") {
    std::mt19937_64 gen(111);
    for (int trial = 0; trial < 500; ++trial) {
      const std::size_t n = 1 + gen() % 1500;
      const auto k = static_cast<std::int64_t>(1 + gen() % n);
      const std::size_t ns = n - static_cast<std::size_t>(k);
      auto data = oracle::random_values(gen, n, trial % 3 == 0 ? 10 : 1 << 30);
      auto reference = data;
      const bool skip = trial % 2 == 0;

      SelectOptions opts;
      opts.skip_phase1 = skip;
      const SelectResult r = dualheap_select(data, k, opts);

      oracle::PointerReference ref(reference, ns);
      if (!skip) ref.Phase1();
      ref.Phase2();
      ref.Phase3();

      REQUIRE(data == reference);
      CHECK(r.counters.treeswaps_toplevel == ref.toplevel);
      CHECK(r.counters.treeswaps_recursive == ref.calls);
      CHECK(r.counters.max_treeswap_depth == ref.max_depth);
    }
  }

  TEST_CASE("deterministic") {
    std::mt19937_64 gen(222);
    auto input = oracle::random_values(gen, 3000, 1 << 30);
    auto a = input;
    auto b = input;
    const SelectResult ra = dualheap_select(a, 1234);
    const SelectResult rb = dualheap_select(b, 1234);
    CHECK(a == b);
    CHECK(ra.counters == rb.counters);
    CHECK(ra.kth == rb.kth);
  }

  TEST_CASE("all_equal_values_terminate") {
    std::vector<Element> data(1000, 7);
    const SelectResult r = dualheap_select(data, 300);
    CHECK(r.kth == 7);
    CHECK(r.counters.treeswaps_toplevel == 0);
    CHECK(r.counters.total_moves() == 0);
  }
}

TEST_SUITE("verify_partition") {
  TEST_CASE("valid_partition_passes") {
    const std::vector<Element> data{1, 2, 3};
    CHECK(verify_partition(data, 1, 2).ok);
  }

  TEST_CASE("reports_first_violation") {
    const std::vector<Element> data{3, 1, 2};
    const PartitionReport r = verify_partition(data, 1, 1);
    CHECK_FALSE(r.ok);
    REQUIRE(r.first_violation.has_value());
    CHECK(*r.first_violation == 0);
  }

  TEST_CASE("expected_value_mismatch_fails") {
    const std::vector<Element> data{1, 2, 3};
    const PartitionReport r = verify_partition(data, 1, 3);
    CHECK_FALSE(r.ok);
    CHECK(*r.first_violation == 1);
  }

  TEST_CASE("large_side_violation") {
    const std::vector<Element> data{1, 5, 4, 2};
    const PartitionReport r = verify_partition(data, 1, 5);
    CHECK_FALSE(r.ok);
    CHECK(*r.first_violation == 2);
  }

  TEST_CASE("empty_small_side_is_vacuous") {
    const std::vector<Element> data{2, 3, 2};
    CHECK(verify_partition(data, 0, 2).ok);
  }
}
