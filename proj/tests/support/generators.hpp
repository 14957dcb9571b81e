#pragma once

#include <cstddef>
#include <random>

#include "arbor/finite_tree.hpp"
#include "arbor/presentation.hpp"

namespace gen {

using Rng = std::mt19937_64;

/// Uniform random recursive tree on n vertices with shuffled ids "v<k>".
arbor::FiniteTree random_tree(Rng& rng, std::size_t n);

/// Same tree, ids permuted and edges listed in a random order.
arbor::FiniteTree relabel(const arbor::FiniteTree& t, Rng& rng);

/// Random presentation with 1..max_states states, at most two slots per
/// state, multiplicities drawn from {1, 2, w}. At most one slot per state
/// has multiplicity above 1, which keeps unfoldings small enough for the
/// stripping oracles.
arbor::TreePresentation random_presentation(Rng& rng, std::size_t max_states = 5);

}  // namespace gen

namespace gen {

/// A different presentation of the same rooted tree: states renamed and
/// cloned, slots shuffled, finite multiplicities split into two slots.
arbor::TreePresentation isomorphic_variant(const arbor::TreePresentation& p, Rng& rng);

}  // namespace gen
