#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "arbor/multiplicity.hpp"

namespace arbor {

struct Slot {
  std::size_t state = 0;
  Multiplicity multiplicity = Multiplicity::finite(1);

  friend bool operator==(const Slot&, const Slot&) = default;
};

struct State {
  std::string name;
  std::vector<Slot> slots;

  friend bool operator==(const State&, const State&) = default;
};

/// A finite state graph whose rooted unfolding is a (possibly infinite) tree.
///
/// Every vertex of the unfolding is labelled by a state; a vertex labelled s
/// has, for each slot (t, m) of s, m children labelled t. The root of the
/// unfolding is labelled by root().
class TreePresentation {
 public:
  /// Throws std::invalid_argument when a slot points outside the state list,
  /// a multiplicity is zero, names are duplicated or not identifiers, or
  /// there are no states.
  TreePresentation(std::vector<State> states, std::size_t root);

  std::size_t state_count() const noexcept { return states_.size(); }
  const std::vector<State>& states() const noexcept { return states_; }
  const State& state(std::size_t s) const { return states_.at(s); }
  const std::string& name(std::size_t s) const { return states_.at(s).name; }
  std::size_t root() const noexcept { return root_; }
  std::optional<std::size_t> find(std::string_view name) const;

  /// Same state graph, different root.
  TreePresentation with_root(std::size_t root) const;

  friend bool operator==(const TreePresentation&, const TreePresentation&) = default;

 private:
  std::vector<State> states_;
  std::size_t root_ = 0;
};

bool is_identifier(std::string_view name);

/// A name not yet used by `p`, derived from `base`.
std::string fresh_name(const std::vector<State>& states, std::string_view base);

/// States reachable from the root, as a mask.
std::vector<bool> reachable_states(const TreePresentation& p);

/// Removes unreachable states. Slot indices inside the surviving states are
/// unchanged, so addresses stay valid.
TreePresentation drop_unreachable(const TreePresentation& p);

// --- DSL -------------------------------------------------------------------

class ParseError : public std::runtime_error {
 public:
  enum class Kind { syntax, bad_multiplicity, undefined_state, duplicate_state, no_root };

  ParseError(Kind kind, std::size_t line, std::size_t column, const std::string& detail);

  Kind kind() const noexcept { return kind_; }
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }
  /// Syntax and multiplicity problems are parse errors; the rest are
  /// validation errors (the text was well-formed).
  bool is_validation() const noexcept;

 private:
  Kind kind_;
  std::size_t line_;
  std::size_t column_;
};

std::string_view to_string(ParseError::Kind kind);

/// Grammar: `state NAME { CHILD:MULT ... } ... root NAME`, whitespace
/// insensitive, optional commas between children, `#` comments, MULT a
/// positive integer or `w`.
TreePresentation parse_dsl(std::string_view text);

TreePresentation read_presentation_file(const std::filesystem::path& path);

/// One-line canonical form, e.g. "state r { q:2 } state q { q:2 } root r\n".
std::string serialize(const TreePresentation& p);

// --- Addresses and occurrence classes ----------------------------------------

/// One edge of the unfolding: which slot of the parent's state, and which of
/// that slot's copies.
struct Step {
  std::uint32_t slot = 0;
  std::uint64_t copy = 0;

  friend auto operator<=>(const Step&, const Step&) = default;
};

/// A vertex of the unfolding, as the path of steps from the root.
using Address = std::vector<Step>;

std::string to_string(const Address& a);

/// Inverse of to_string: "/" or "/slot.copy/slot.copy...". Throws
/// std::invalid_argument on malformed text.
Address parse_address(std::string_view text);

/// Whether `a` names a vertex of the unfolding of `p`.
bool valid_address(const TreePresentation& p, const Address& a);

/// State of the vertex at `a`; throws std::out_of_range when invalid.
std::size_t state_at(const TreePresentation& p, const Address& a);

/// Whether the ray-free parent side of an occurrence also holds a ray.
struct OccurrenceClass {
  std::size_t state = 0;
  bool up_ray = false;

  friend auto operator<=>(const OccurrenceClass&, const OccurrenceClass&) = default;
};

std::string to_string(const TreePresentation& p, const OccurrenceClass& c);

/// contains_ray_state for every state at once.
std::vector<bool> ray_states(const TreePresentation& p);

/// The subtree below state s contains a ray iff s reaches a directed cycle.
bool contains_ray_state(const TreePresentation& p, std::size_t s);

/// Number of ray-containing directions below a vertex of state s, counting
/// multiplicity and saturating at 2.
std::uint32_t ray_children(const TreePresentation& p, const std::vector<bool>& rays, std::size_t s);

/// Class of the child reached through `slot` from a vertex of class `parent`.
OccurrenceClass child_class(const TreePresentation& p, const std::vector<bool>& rays,
                            const OccurrenceClass& parent, std::size_t slot);

OccurrenceClass root_class(const TreePresentation& p);

/// Class of the vertex at `a`.
OccurrenceClass class_at(const TreePresentation& p, const Address& a);

/// Same, reusing precomputed ray_states(p).
OccurrenceClass class_at(const TreePresentation& p, const std::vector<bool>& rays, const Address& a);

/// The finite graph of occurrence classes reachable from the root class.
class ClassGraph {
 public:
  struct Edge {
    std::size_t slot = 0;
    std::size_t target = 0;
    Multiplicity multiplicity;
  };

  explicit ClassGraph(const TreePresentation& p);

  std::size_t size() const noexcept { return nodes_.size(); }
  const OccurrenceClass& node(std::size_t i) const { return nodes_.at(i); }
  const std::vector<OccurrenceClass>& nodes() const noexcept { return nodes_; }
  const std::vector<Edge>& edges(std::size_t i) const { return edges_.at(i); }
  std::optional<std::size_t> index(const OccurrenceClass& c) const;
  const std::vector<bool>& rays() const noexcept { return rays_; }

 private:
  std::vector<OccurrenceClass> nodes_;
  std::vector<std::vector<Edge>> edges_;
  std::map<OccurrenceClass, std::size_t> index_;
  std::vector<bool> rays_;
};

/// How many vertices of the unfolding fall in class `c`: zero when
/// unreachable, ω when reachable from a cycle of the class graph or through
/// an ω edge, otherwise the sum over paths of multiplicity products.
Multiplicity occurrence_count(const TreePresentation& p, const OccurrenceClass& c);

/// occurrence_count for every node of `g`, in node order.
std::vector<Multiplicity> occurrence_counts(const ClassGraph& g);

}  // namespace arbor
