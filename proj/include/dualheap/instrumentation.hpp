#pragma once

// Operation accounting shared by every selection algorithm in the library.
//
// Accounting rules:
//   - one comparison per comparator invocation;
//   - one move per element written into a sequence slot (a promotion is one
//     move, placing a held value is one move, a swap is two moves);
//   - copies of a held value into a local are not counted.
//
// Algorithms never touch OpCounters directly; they go through a Meter, which
// also owns the comparator. Swapping in a different comparator (for example a
// deliberately broken one in tests) does not change algorithm code.

#include <array>
#include <cassert>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string_view>

namespace dualheap {

using Element = std::int64_t;

enum class Phase : std::uint8_t { phase1 = 0, phase2 = 1, phase3 = 2, baseline = 3 };

inline constexpr std::size_t kPhaseCount = 4;

std::string_view phase_name(Phase phase);

enum class OpKind : std::uint8_t {
  comparison,
  move,
  promotion,
  treeswap_enter,
  treeswap_exit,
  treeswap_round,  // one top-level iteration of the exchange loop
  transfer,
};

struct OpCounters {
  using PerPhase = std::array<std::uint64_t, kPhaseCount>;

  PerPhase comparisons{};
  PerPhase moves{};
  PerPhase promotions{};
  std::uint64_t treeswaps_toplevel = 0;
  std::uint64_t treeswaps_recursive = 0;  // every TreeSwap call, top-level included
  std::uint64_t max_treeswap_depth = 0;
  std::uint64_t transfers = 0;
  std::uint64_t current_depth = 0;

  std::uint64_t comparisons_in(Phase p) const { return comparisons[static_cast<std::size_t>(p)]; }
  std::uint64_t moves_in(Phase p) const { return moves[static_cast<std::size_t>(p)]; }
  std::uint64_t promotions_in(Phase p) const { return promotions[static_cast<std::size_t>(p)]; }

  std::uint64_t total_comparisons() const;
  std::uint64_t total_moves() const;
  std::uint64_t total_promotions() const;

  friend bool operator==(const OpCounters&, const OpCounters&) = default;
};

inline void record(OpCounters& c, OpKind kind, Phase phase) {
  const auto p = static_cast<std::size_t>(phase);
  switch (kind) {
    case OpKind::comparison:
      ++c.comparisons[p];
      break;
    case OpKind::move:
      ++c.moves[p];
      break;
    case OpKind::promotion:
      ++c.promotions[p];
      break;
    case OpKind::treeswap_enter:
      ++c.treeswaps_recursive;
      ++c.current_depth;
      if (c.current_depth > c.max_treeswap_depth) c.max_treeswap_depth = c.current_depth;
      break;
    case OpKind::treeswap_exit:
      assert(c.current_depth > 0 && "treeswap_exit without matching enter");
      --c.current_depth;
      break;
    case OpKind::treeswap_round:
      ++c.treeswaps_toplevel;
      break;
    case OpKind::transfer:
      ++c.transfers;
      break;
  }
}

// Componentwise sum; max_treeswap_depth takes the larger of the two.
OpCounters merge(const OpCounters& a, const OpCounters& b);

// Comparator plus optional counting sink. A null sink disables counting
// without changing any result.
template <class Less = std::less<Element>>
class Meter {
 public:
  explicit Meter(OpCounters* sink = nullptr, Phase phase = Phase::phase1, Less less = Less{})
      : sink_(sink), phase_(phase), less_(std::move(less)) {}

  bool less(Element a, Element b) {
    tally(OpKind::comparison);
    return less_(a, b);
  }

  void move(std::size_t count = 1) {
    for (std::size_t i = 0; i < count; ++i) tally(OpKind::move);
  }
  void promotion() { tally(OpKind::promotion); }
  void treeswap_enter() { tally(OpKind::treeswap_enter); }
  void treeswap_exit() { tally(OpKind::treeswap_exit); }
  void treeswap_round() { tally(OpKind::treeswap_round); }
  void transfer(std::size_t count = 1) {
    for (std::size_t i = 0; i < count; ++i) tally(OpKind::transfer);
  }

  void set_phase(Phase phase) { phase_ = phase; }
  Phase phase() const { return phase_; }
  OpCounters* sink() const { return sink_; }

 private:
  void tally(OpKind kind) {
    if (sink_ != nullptr) record(*sink_, kind, phase_);
  }

  OpCounters* sink_;
  Phase phase_;
  Less less_;
};

}  // namespace dualheap
