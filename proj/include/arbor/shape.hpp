#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "arbor/presentation.hpp"
#include "arbor/pruning.hpp"

namespace arbor {

/// A rayless rooted tree of finite height, stored as a DAG in which equal
/// subtrees share one node and equal siblings are merged into one child
/// entry with summed multiplicity.
class Shape {
 public:
  struct Child {
    std::size_t node = 0;
    Multiplicity multiplicity;

    friend bool operator==(const Child&, const Child&) = default;
  };

  /// A shape holding a single leaf as its root.
  Shape();

  /// Interns a node with the given children (merged and sorted); returns its
  /// index. Child indices must already exist.
  std::size_t add(std::vector<Child> children);
  void set_root(std::size_t node);

  std::size_t root() const noexcept { return root_; }
  std::size_t size() const noexcept { return nodes_.size(); }
  const std::vector<Child>& children(std::size_t node) const { return nodes_.at(node); }
  /// Canonical code: "(" + sorted child entries + ")", an entry being its
  /// multiplicity ("w" for ω, omitted when 1) followed by the child's code.
  const std::string& code(std::size_t node) const { return codes_.at(node); }
  std::uint64_t height(std::size_t node) const { return heights_.at(node); }

  const std::string& canonical_form() const { return code(root_); }
  std::uint64_t height() const { return height(root_); }
  bool trivial() const { return children(root_).empty(); }

  /// Copies `node` of `other` (with everything below it) into this shape.
  std::size_t import(const Shape& other, std::size_t node);

 private:
  std::vector<std::vector<Child>> nodes_;
  std::vector<std::string> codes_;
  std::vector<std::uint64_t> heights_;
  std::map<std::string, std::size_t> index_;
  std::size_t root_ = 0;
};

/// The whole subtree below a rayless state. Throws std::invalid_argument for
/// a state that reaches a cycle.
Shape shape_of_state(const TreePresentation& p, std::size_t state);

/// Which directions at the vertex become part of the shape.
struct ShapeView {
  bool include_up = true;
  /// Skip directions that carry a ray instead of rejecting them.
  bool rayless_only = false;
  /// Leave out one copy of this child slot (used to split an edge).
  std::optional<std::uint32_t> drop_one_copy_of_slot;
};

/// The tree seen from the vertex at `a`, rooted there. Throws
/// std::invalid_argument when a selected direction carries a ray.
Shape shape_at(const TreePresentation& p, const Address& a, const ShapeView& view = {});

/// Presentation whose unfolding is the shape. State i is named "h<i>".
TreePresentation to_presentation(const Shape& s);

/// The shape cut off below `depth`.
Shape truncate(const Shape& s, std::uint64_t depth);

/// Rank of the shape as a standalone tree.
RankValue shape_rank(const Shape& s);

/// Canonical form of a rayless presentation as an unrooted tree: the shape
/// rooted at its central vertex, or "E[a|b]" for a central edge whose two
/// sides have codes a <= b.
std::string center_rooted_form(const TreePresentation& p);

}  // namespace arbor
