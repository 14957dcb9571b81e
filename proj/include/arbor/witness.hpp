#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "arbor/presentation.hpp"

namespace arbor {

using ClassPairSet = std::set<std::pair<OccurrenceClass, OccurrenceClass>>;

/// Where one source slot's copies go: copies [start, start + count) of the
/// source slot land on target copies base, base + stride, ... of
/// target_slot.
struct Piece {
  std::uint32_t target_slot = 0;
  Multiplicity count;
  std::uint64_t base = 0;
  std::uint64_t stride = 1;
};

/// Per source slot, its pieces in copy order.
using ChildAssignment = std::vector<std::vector<Piece>>;

/// Tries to place the children of a source vertex of class `a` injectively
/// onto the children of a target vertex of class `b`, a source slot being
/// allowed onto a target slot when allowed(source child class, target child
/// class). An ω source slot needs a compatible ω target slot; finite demand
/// goes to a compatible ω slot when there is one and through a max-flow over
/// finite slots otherwise.
std::optional<ChildAssignment> child_assignment(
    const TreePresentation& src, const std::vector<bool>& src_rays, const OccurrenceClass& a,
    const TreePresentation& tgt, const std::vector<bool>& tgt_rays, const OccurrenceClass& b,
    const std::function<bool(const OccurrenceClass&, const OccurrenceClass&)>& allowed);

/// The greatest downward simulation between the class graphs of two
/// presentations: (a, b) is related when the subtree below any vertex of
/// class a embeds into the subtree below any vertex of class b with every
/// child pair related again. With core_respecting set, pairs sending a core
/// class to a non-core class are excluded from the start.
class Simulation {
 public:
  Simulation(const TreePresentation& src, const TreePresentation& tgt, bool core_respecting = true);

  bool contains(const OccurrenceClass& a, const OccurrenceClass& b) const;
  const ClassPairSet& pairs() const noexcept { return pairs_; }

  /// Canonical child assignment for a related pair.
  const ChildAssignment& assignment(const OccurrenceClass& a, const OccurrenceClass& b) const;

  /// Image of a source address under the downward map sending the source
  /// root to `root_image`. The root pair must be related.
  Address image(const Address& root_image, const Address& a) const;

  const TreePresentation& source() const noexcept { return src_; }
  const TreePresentation& target() const noexcept { return tgt_; }

 private:
  TreePresentation src_;
  TreePresentation tgt_;
  std::vector<bool> src_rays_;
  std::vector<bool> tgt_rays_;
  ClassPairSet pairs_;
  std::map<std::pair<OccurrenceClass, OccurrenceClass>, ChildAssignment> assignments_;
};

/// Whether `ext` is closed: every pair has a child assignment using pairs of
/// `ext` only.
bool is_simulation(const TreePresentation& src, const TreePresentation& tgt, const ClassPairSet& ext);

class DepthExceedsWitness : public std::invalid_argument {
 public:
  DepthExceedsWitness(std::size_t asked, std::size_t depth)
      : std::invalid_argument("verification depth " + std::to_string(asked) +
                              " exceeds witness depth " + std::to_string(depth)) {}
};

struct MapEntry {
  Address source;
  Address target;
  /// Exempt from the frontier rule: the image is spelled out below this
  /// vertex instead of following the extension relation.
  bool pinned = false;
};

/// A map on the truncation unfold(source, depth) with ω slots cut to
/// `width` copies, plus an extension relation describing how the map
/// continues below its frontier.
struct TruncatedWitness {
  std::size_t depth = 0;
  std::uint64_t width = 3;
  std::vector<MapEntry> entries;
  ClassPairSet extension;
};

/// A map given by a rule rather than a table, so it can be evaluated at any
/// depth and composed.
struct WitnessRule {
  std::function<Address(const Address&)> image;
  std::function<bool(const Address&)> pinned = [](const Address&) { return false; };
};

/// The downward map sending the source root to `root_image`, or nullopt when
/// the root pair is not related by sim.
std::optional<WitnessRule> downward_rule(std::shared_ptr<const Simulation> sim, const Address& root_image);

/// outer after inner; pinned where either is.
WitnessRule compose(const WitnessRule& outer, const WitnessRule& inner);

/// Tabulates a rule on the truncation; the extension relation is the
/// greatest core-respecting simulation between the two presentations.
/// Throws BudgetExceeded past max_vertices.
TruncatedWitness materialize(const WitnessRule& rule, const TreePresentation& src,
                             const TreePresentation& tgt, std::size_t depth, std::uint64_t width,
                             std::size_t max_vertices = 1000000);

/// Convenience: downward_rule + materialize.
std::optional<TruncatedWitness> find_rooted_witness(const TreePresentation& src,
                                                    const TreePresentation& tgt,
                                                    const Address& root_image, std::size_t depth,
                                                    std::uint64_t width = 3);

struct WitnessCheck {
  bool ok = true;
  std::string reason;
  explicit operator bool() const noexcept { return ok; }
};

/// Checks on unfold(src, depth, w.width): every vertex has an entry with a
/// valid target address, the map is injective and adjacency-preserving,
/// every unpinned frontier vertex with children is mapped downward onto a
/// class related to its own by the extension, and the extension is a
/// simulation. Throws DepthExceedsWitness when depth > w.depth.
WitnessCheck verify_witness(const TruncatedWitness& w, const TreePresentation& src,
                            const TreePresentation& tgt, std::size_t depth);

/// Core vertices of the source (up to `depth`) land on core vertices, and
/// the extension never relates a core class to a non-core one.
bool core_respecting(const TruncatedWitness& w, const TreePresentation& src,
                     const TreePresentation& tgt, std::size_t depth);

}  // namespace arbor
