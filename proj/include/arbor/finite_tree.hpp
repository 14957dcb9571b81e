#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace arbor {

/// Dense vertex index into a FiniteTree. Meaningless across trees.
using Vertex = std::size_t;

enum class NotATreeReason { cycle, disconnected, duplicate_edge, self_loop };

std::string_view to_string(NotATreeReason reason);

class NotATree : public std::invalid_argument {
 public:
  explicit NotATree(NotATreeReason reason);
  NotATreeReason reason() const noexcept { return reason_; }

 private:
  NotATreeReason reason_;
};

class EmptyTree : public std::invalid_argument {
 public:
  EmptyTree() : std::invalid_argument("operation requires a non-empty tree") {}
};

/// An explicit finite tree.
///
/// Vertices carry opaque string ids that survive pruning and relabeling; the
/// algorithms only ever look at adjacency. The empty tree is a valid value
/// (it is what pruning converges to) but no parser produces it.
class FiniteTree {
 public:
  using Edge = std::pair<std::string, std::string>;

  FiniteTree() = default;

  /// Builds a tree from an edge list plus any vertices that have no edges.
  /// Throws NotATree on self-loops, duplicate edges, cycles, or several
  /// components.
  static FiniteTree from_edges(std::span<const Edge> edges,
                               std::span<const std::string> isolated = {});

  /// Same validation, vertices named "0".."n-1".
  static FiniteTree from_index_edges(std::size_t n,
                                     std::span<const std::pair<Vertex, Vertex>> edges);

  std::size_t size() const noexcept { return ids_.size(); }
  bool empty() const noexcept { return ids_.empty(); }
  std::size_t edge_count() const noexcept { return empty() ? 0 : size() - 1; }

  const std::vector<Vertex>& neighbors(Vertex v) const { return adj_.at(v); }
  std::size_t degree(Vertex v) const { return adj_.at(v).size(); }
  const std::string& id(Vertex v) const { return ids_.at(v); }
  std::optional<Vertex> find(std::string_view id) const;

  /// Edges as (u, v) with u < v, sorted.
  std::vector<std::pair<Vertex, Vertex>> edges() const;

  /// Subgraph induced by the kept vertices, ids preserved. The caller
  /// guarantees the result is a tree or empty; nothing is re-validated.
  FiniteTree induced(const std::vector<bool>& keep) const;

 private:
  friend class TreeBuilder;
  FiniteTree(std::vector<std::string> ids, std::vector<std::vector<Vertex>> adj)
      : ids_(std::move(ids)), adj_(std::move(adj)) {}

  std::vector<std::string> ids_;
  std::vector<std::vector<Vertex>> adj_;
};

/// Incremental construction for code that already knows it is producing a
/// tree (unfoldings, shape expansions). Edges always attach a new vertex to
/// an existing one, so no validation is needed.
class TreeBuilder {
 public:
  Vertex add_root(std::string id);
  Vertex add_child(Vertex parent, std::string id);
  std::size_t size() const noexcept { return ids_.size(); }
  FiniteTree build() &&;

 private:
  std::vector<std::string> ids_;
  std::vector<std::vector<Vertex>> adj_;
};

struct RootedFiniteTree {
  FiniteTree tree;
  Vertex root = 0;
};

std::map<std::string, std::size_t> degree_map(const FiniteTree& t);

/// AHU code: a leaf is "()", an inner vertex wraps its children's codes,
/// sorted lexicographically. Equal codes iff rooted-isomorphic.
std::string ahu_canonical(const RootedFiniteTree& t);

/// One or two vertices minimising the largest component left after removal.
std::vector<Vertex> centroids(const FiniteTree& t);

bool isomorphic(const FiniteTree& t, const FiniteTree& s);

/// Path 0 - 1 - ... - (n-1), vertex ids "0".."n-1".
FiniteTree make_path(std::size_t n);

/// Centre "c" joined to leaves "l0".."l(k-1)".
FiniteTree make_star(std::size_t leaves);

}  // namespace arbor
