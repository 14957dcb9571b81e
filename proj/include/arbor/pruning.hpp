#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "arbor/finite_tree.hpp"
#include "arbor/presentation.hpp"

namespace arbor {

/// A natural number or ω.
class RankValue {
 public:
  static constexpr RankValue finite(std::uint64_t n) { return RankValue(n, false); }
  static constexpr RankValue omega() { return RankValue(0, true); }

  constexpr bool is_omega() const noexcept { return omega_; }
  constexpr bool is_finite() const noexcept { return !omega_; }
  /// Throws std::logic_error for ω.
  std::uint64_t value() const;

  /// "Finite(n)" or "Omega".
  std::string to_string() const;

  friend constexpr bool operator==(RankValue a, RankValue b) noexcept {
    return a.omega_ == b.omega_ && (a.omega_ || a.value_ == b.value_);
  }

 private:
  constexpr RankValue(std::uint64_t v, bool omega) : value_(v), omega_(omega) {}
  std::uint64_t value_;
  bool omega_;
};

struct PruningTrace {
  /// rounds[k] holds the vertices removed in round k + 1.
  std::vector<std::vector<Vertex>> rounds;
  /// 1-based round in which each vertex goes; 0 for a vertex never removed.
  std::vector<std::size_t> removal_round;
};

struct PruningResult {
  PruningTrace trace;
  RankValue rank = RankValue::finite(0);
};

/// Drops every vertex of degree <= 1 at once.
FiniteTree prune_step(const FiniteTree& t);

/// Iterates prune_step to its fixpoint. For a finite tree that fixpoint is
/// empty and the rank is the number of rounds.
PruningResult pruning_trace(const FiniteTree& t);

/// The k-th tree of a trace (k = 0 is t itself).
FiniteTree pruning_stage(const FiniteTree& t, const PruningTrace& trace, std::size_t k);

struct CoreClassification {
  std::set<OccurrenceClass> core_classes;
  std::vector<bool> ray_states;

  bool is_core(const OccurrenceClass& c) const { return core_classes.count(c) > 0; }
};

/// Core classes: those with at least two ray-carrying directions.
CoreClassification classify_core(const TreePresentation& p);

enum class EndCategory { zero_ends, one_end, many_ends };

std::string_view to_string(EndCategory e);

/// Judged on the states reachable from the root.
EndCategory end_category(const TreePresentation& p);

/// Height below each rayless state (0 for a state without slots); empty for
/// states that reach a cycle.
std::vector<std::optional<std::uint64_t>> rayless_heights(const TreePresentation& p);

/// Round in which the vertex at `a` disappears, or nullopt when it is never
/// removed. A vertex goes in round 1 + (second largest far distance over its
/// directions), a ray-carrying direction being infinitely far.
std::optional<std::uint64_t> removal_round(const TreePresentation& p, const Address& a);

/// Omega for one-ended trees; otherwise the largest removal round.
RankValue rank_of_presentation(const TreePresentation& p);

}  // namespace arbor
