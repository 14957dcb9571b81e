#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "arbor/presentation.hpp"
#include "arbor/shape.hpp"
#include "arbor/siblings.hpp"

namespace arbor {

enum class Outcome { exactly_one, infinite, dichotomy_holds, unknown };

/// "ExactlyOne", "Infinite", "DichotomyHolds", "Unknown".
std::string_view to_string(Outcome o);

enum class Justification {
  finite_tree,
  rayless_dichotomy,
  leafless_chain,
  condition_one,
  complement_ray,
  finite_branches,
  none,
};

/// The result name printed next to an outcome, e.g. "Theorem 3.2".
std::string_view citation(Justification j);

struct Budget {
  /// Depth of the truncations searched and materialised.
  std::size_t witness_depth = 10;
  std::uint64_t width = 3;
  std::size_t max_vertices = 100000;
  /// Candidate root images tried for a self-embedding.
  std::size_t max_root_images = 16;
  std::size_t family_size = 4;
};

struct BudgetUsed {
  std::size_t root_images_tried = 0;
  std::size_t witness_vertices = 0;
  bool exhausted = false;
};

struct Verdict {
  Outcome outcome = Outcome::unknown;
  Justification justification = Justification::none;
  std::optional<SiblingFamily> family;
  std::vector<std::string> notes;
  BudgetUsed budget_used;
};

/// A leafy branch (or, for a rayless tree, the whole tree rooted at its
/// root) with an ω child C and a proper truncation C' of C, plus the rooted
/// siblings obtained by adding 0, 1, ... copies of C'.
struct Condition1Evidence {
  Shape branch;
  AugmentSite site;
  std::vector<Shape> sibling_shapes;
};

/// Heuristic: nullopt means only that the pattern was not found.
std::optional<Condition1Evidence> check_condition1(const TreePresentation& p, std::size_t count = 4);

struct Condition3Result {
  /// Set when no self-embedding with a ray outside its image turned up
  /// within budget and every branch is finite.
  std::optional<std::string> annotation;
};

/// Finite rank and finitely many leafy branches (many-ended trees only).
std::optional<Condition3Result> check_condition3(const TreePresentation& p, const Budget& budget = {});

/// A self-embedding whose image misses a ray, found by trying root images
/// in BFS order.
struct SelfEmbeddingSearch {
  std::optional<SelfEmbedding> witness;
  BudgetUsed used;
};

SelfEmbeddingSearch search_self_embedding(const TreePresentation& p, const Budget& budget);

Verdict analyze(const TreePresentation& p, const Budget& budget = {});

}  // namespace arbor
