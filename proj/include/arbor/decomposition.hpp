#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "arbor/presentation.hpp"
#include "arbor/pruning.hpp"
#include "arbor/shape.hpp"

namespace arbor {

class NoCore : public std::invalid_argument {
 public:
  explicit NoCore(EndCategory category)
      : std::invalid_argument("leaf representation not applicable"), category_(category) {}
  EndCategory category() const noexcept { return category_; }

 private:
  EndCategory category_;
};

struct LeafyBranch {
  Shape shape;
  /// Core class of the vertex the branch hangs from.
  OccurrenceClass attachment;
  /// Number of vertices of the attachment class, hence of branch instances.
  Multiplicity occurrences;
};

struct LeafRepresentation {
  /// The leafless core as a presentation over core classes; class (X, up)
  /// keeps the name X, the topmost class gets a fresh "X_top" name when its
  /// up flag is false.
  TreePresentation core;
  /// core.state(i) corresponds to core_classes[i].
  std::vector<OccurrenceClass> core_classes;
  /// Address of the topmost core vertex in the original unfolding.
  Address top;
  std::vector<LeafyBranch> branches;
};

/// Splits a many-ended tree into its core and leafy branches. Throws NoCore
/// for rayless and one-ended trees.
LeafRepresentation leaf_representation(const TreePresentation& p);

/// Address of the topmost core vertex: follow the unique ray direction down
/// from the root until the core is reached. Throws NoCore without a core.
Address core_top(const TreePresentation& p);

RankValue branch_rank(const LeafyBranch& b);

/// Total number of branch instances.
Multiplicity branch_count(const LeafRepresentation& rep);

/// Largest distance from the core to a leaf (0 when there are no branches).
std::uint64_t max_leaf_distance(const LeafRepresentation& rep);

/// Branch canonical form -> number of instances.
std::map<std::string, Multiplicity> branch_profile(const LeafRepresentation& rep);

}  // namespace arbor
