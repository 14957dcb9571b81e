#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "arbor/finite_tree.hpp"
#include "arbor/presentation.hpp"

namespace arbor {

class BudgetExceeded : public std::runtime_error {
 public:
  explicit BudgetExceeded(std::size_t limit)
      : std::runtime_error("unfolding exceeds " + std::to_string(limit) + " vertices"), limit_(limit) {}
  std::size_t limit() const noexcept { return limit_; }

 private:
  std::size_t limit_;
};

struct UnfoldOptions {
  std::size_t depth = 0;
  /// Copies materialised for an ω slot.
  std::uint64_t omega_width = 3;
  /// When set, every multiplicity (ω included) is clamped to this value and
  /// omega_width is ignored.
  std::optional<std::uint64_t> multiplicity_cap;
  std::size_t max_vertices = 100000;
};

struct UnfoldedVertex {
  std::size_t state = 0;
  std::size_t depth = 0;
  std::optional<Vertex> parent;
  Step step;  // edge from the parent; meaningless at the root
  OccurrenceClass cls;
  std::vector<Vertex> children;
};

/// A truncation of the unfolding: every vertex at depth < options.depth has
/// all of its (width-limited) children. Vertices are numbered in BFS order,
/// children in slot then copy order, and vertex ids read "state/depth/index"
/// with index counted within the depth level.
struct Unfolding {
  RootedFiniteTree tree;
  std::vector<UnfoldedVertex> vertices;
  UnfoldOptions options;

  std::optional<Vertex> find(const Address& a) const;
  Address address(Vertex v) const;
  const UnfoldedVertex& at(Vertex v) const { return vertices.at(v); }
  std::size_t size() const noexcept { return vertices.size(); }
};

Unfolding unfold(const TreePresentation& p, const UnfoldOptions& options);
Unfolding unfold(const TreePresentation& p, std::size_t depth);

}  // namespace arbor
