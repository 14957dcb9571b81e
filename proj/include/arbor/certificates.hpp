#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>

#include "arbor/presentation.hpp"
#include "arbor/pruning.hpp"

namespace arbor {

struct RankMismatch {
  RankValue first;
  RankValue second;
};

struct MaxLeafDistanceMismatch {
  std::uint64_t first = 0;
  std::uint64_t second = 0;
};

struct DegreeProfileMismatch {
  Multiplicity degree;
  Multiplicity first;
  Multiplicity second;
};

struct BranchProfileMismatch {
  std::string branch;
  Multiplicity first;
  Multiplicity second;
};

/// A recomputable isomorphism invariant whose values differ between two
/// trees. Rank and degree counts are preserved by any isomorphism; so are the
/// core and the multiset of leafy branches, which gives the other two.
using NonIsoCertificate =
    std::variant<RankMismatch, MaxLeafDistanceMismatch, DegreeProfileMismatch, BranchProfileMismatch>;

std::string_view kind_name(const NonIsoCertificate& c);
std::string describe(const NonIsoCertificate& c);

/// Degree -> number of vertices with that degree (ω allowed on both sides).
std::map<Multiplicity, Multiplicity> degree_profile(const TreePresentation& p);

/// Branch canonical form -> number of instances for a many-ended tree; for
/// a rayless tree, its center-rooted form with count 1. Nothing for a
/// one-ended tree.
std::optional<std::map<std::string, Multiplicity>> branch_profile_of(const TreePresentation& p);

/// Only many-ended trees have a core to measure from.
std::optional<std::uint64_t> max_leaf_distance_of(const TreePresentation& p);

/// Recomputes the cited invariant on both sides: true iff the recorded
/// values are the actual ones and they differ.
bool check_certificate(const NonIsoCertificate& c, const TreePresentation& p, const TreePresentation& q);

/// First certificate found, trying rank, max leaf distance, degree profile,
/// then branch profile.
std::optional<NonIsoCertificate> find_certificate(const TreePresentation& p, const TreePresentation& q);

}  // namespace arbor
