#pragma once

#include <optional>
#include <vector>

#include "arbor/finite_tree.hpp"

namespace arbor {

/// An embedding of finite trees: map[v] is the image of source vertex v.
struct ExactWitness {
  std::vector<Vertex> map;
};

/// Some embedding of t into s, if one exists. The empty tree embeds
/// everywhere.
std::optional<ExactWitness> embeds(const FiniteTree& t, const FiniteTree& s);

/// An embedding sending t.root to s.root, if one exists.
std::optional<ExactWitness> rooted_embeds(const RootedFiniteTree& t, const RootedFiniteTree& s);

bool equimorphic_finite(const FiniteTree& t, const FiniteTree& s);

/// Injective, total and adjacency-preserving.
bool verify_witness(const ExactWitness& w, const FiniteTree& t, const FiniteTree& s);

/// Maximum bipartite matching by augmenting paths, trying left vertices and
/// their candidate lists in index order. Returns, per left vertex, the
/// matched right vertex or -1.
std::vector<int> maximum_matching(const std::vector<std::vector<int>>& candidates, int right_count);

}  // namespace arbor
