#include "arbor/analyzer.hpp"

#include <algorithm>
#include <memory>

#include "arbor/decomposition.hpp"
#include "arbor/unfold.hpp"

namespace arbor {

std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::exactly_one: return "ExactlyOne";
    case Outcome::infinite: return "Infinite";
    case Outcome::dichotomy_holds: return "DichotomyHolds";
    case Outcome::unknown: return "Unknown";
  }
  return "Unknown";
}

std::string_view citation(Justification j) {
  switch (j) {
    case Justification::finite_tree: return "finite tree";
    case Justification::rayless_dichotomy: return "rayless dichotomy [BT]";
    case Justification::leafless_chain: return "Theorem 3.2";
    case Justification::condition_one: return "condition 1, Lemma 3.3";
    case Justification::complement_ray: return "Lemma 3.4";
    case Justification::finite_branches: return "Proposition 3.5";
    case Justification::none: return "no applicable result";
  }
  return "no applicable result";
}

std::optional<Condition1Evidence> check_condition1(const TreePresentation& p, std::size_t count) {
  std::vector<Shape> candidates;
  switch (end_category(p)) {
    case EndCategory::zero_ends: candidates.push_back(shape_of_state(p, p.root())); break;
    case EndCategory::many_ends:
      for (auto& b : leaf_representation(p).branches) candidates.push_back(std::move(b.shape));
      break;
    case EndCategory::one_end: return std::nullopt;
  }
  for (auto& b : candidates) {
    auto site = find_augment_site(b);
    if (!site) continue;
    Condition1Evidence ev{std::move(b), std::move(*site), {}};
    for (std::size_t k = 0; k < count; ++k) ev.sibling_shapes.push_back(augment(ev.branch, ev.site.node, ev.site.extra, k));
    return ev;
  }
  return std::nullopt;
}

SelfEmbeddingSearch search_self_embedding(const TreePresentation& p, const Budget& budget) {
  SelfEmbeddingSearch out;
  if (end_category(p) == EndCategory::zero_ends) return out;
  UnfoldOptions uo;
  uo.depth = std::min<std::size_t>(budget.witness_depth, 3);
  uo.omega_width = std::min<std::uint64_t>(budget.width, 2);
  uo.max_vertices = budget.max_vertices;
  const Unfolding candidates = unfold(p, uo);
  FamilyOptions fo{budget.witness_depth, budget.width, budget.max_vertices};
  for (Vertex v = 0; v < std::min(candidates.size(), budget.max_root_images); ++v) {
    auto f = self_embedding_at(p, candidates.address(v));
    if (!f) continue;
    ++out.used.root_images_tried;
    try {
      if (find_uncovered_ray(p, *f, budget.family_size, fo)) {
        out.witness = std::move(f);
        return out;
      }
    } catch (const BudgetExceeded&) {
      out.used.exhausted = true;
      return out;
    }
  }
  return out;
}

std::optional<Condition3Result> check_condition3(const TreePresentation& p, const Budget& budget) {
  if (end_category(p) != EndCategory::many_ends) return std::nullopt;
  if (!rank_of_presentation(p).is_finite()) return std::nullopt;
  const auto rep = leaf_representation(p);
  if (!branch_count(rep).is_finite()) return std::nullopt;
  Condition3Result r;
  const bool all_finite = std::all_of(rep.branches.begin(), rep.branches.end(), [](const LeafyBranch& b) {
    return b.shape.canonical_form().find('w') == std::string::npos;
  });
  if (all_finite && !search_self_embedding(p, budget).witness) {
    r.annotation = "Case 2 of Proposition 3.5 suggests Sib=1";
  }
  return r;
}

namespace {

bool reachable_omega(const TreePresentation& p) {
  const auto reach = reachable_states(p);
  for (std::size_t s = 0; s < p.state_count(); ++s) {
    if (!reach[s]) continue;
    for (const auto& slot : p.state(s).slots) {
      if (slot.multiplicity.is_omega()) return true;
    }
  }
  return false;
}

/// Members from index `from` on, with their pairs.
SiblingFamily tail(SiblingFamily f, std::size_t from) {
  if (from == 0) return f;
  SiblingFamily out{f.construction, f.base, {}, {}, {}, {}};
  for (std::size_t i = from; i < f.members.size(); ++i) {
    out.labels.push_back(f.labels[i]);
    out.members.push_back(std::move(f.members[i]));
    out.evidence.push_back(std::move(f.evidence[i]));
  }
  for (auto& pc : f.pairs) {
    if (pc.first < from) continue;
    out.pairs.push_back({pc.first - from, pc.second - from, std::move(pc.certificate)});
  }
  return out;
}

/// At least three members, every pair certified, everything re-checks.
bool settles_infinite(const SiblingFamily& f, std::vector<std::string>& notes) {
  if (f.members.size() < 3) {
    notes.push_back("family has fewer than 3 members");
    return false;
  }
  if (std::any_of(f.pairs.begin(), f.pairs.end(), [](const PairCertificate& pc) { return !pc.certificate; })) {
    notes.push_back("family has uncertified pairs");
    return false;
  }
  auto check = validate_family(f);
  if (!check) notes.push_back("family failed validation: " + check.reason);
  return check.ok;
}

std::size_t witness_vertices(const SiblingFamily& f) {
  std::size_t n = 0;
  for (const auto& e : f.evidence) n += e.member_to_base.entries.size() + e.base_to_member.entries.size();
  return n;
}

}  // namespace

Verdict analyze(const TreePresentation& p, const Budget& budget) {
  Verdict v;
  const FamilyOptions fo{budget.witness_depth, budget.width, budget.max_vertices};
  auto infinite_with = [&](SiblingFamily fam, Justification j) {
    v.budget_used.witness_vertices += witness_vertices(fam);
    if (!settles_infinite(fam, v.notes)) return false;
    v.outcome = Outcome::infinite;
    v.justification = j;
    v.family = std::move(fam);
    return true;
  };
  auto attempt = [&](auto&& make, Justification j) {
    try {
      return infinite_with(make(), j);
    } catch (const GeneratorError& e) {
      v.notes.push_back(e.what());
    } catch (const BudgetExceeded& e) {
      v.budget_used.exhausted = true;
      v.notes.push_back(e.what());
    }
    return false;
  };

  switch (end_category(p)) {
    case EndCategory::zero_ends: {
      if (!reachable_omega(p)) {
        v.outcome = Outcome::exactly_one;
        v.justification = Justification::finite_tree;
        return v;
      }
      if (auto site = find_state_augment_site(p)) {
        if (attempt([&] { return augment_family(p, *site, budget.family_size, fo); }, Justification::condition_one)) {
          return v;
        }
      }
      v.outcome = Outcome::dichotomy_holds;
      v.justification = Justification::rayless_dichotomy;
      return v;
    }
    case EndCategory::one_end:
      v.notes.push_back("one-ended tree: rank Omega, no leaf representation");
      return v;
    case EndCategory::many_ends: break;
  }

  const RankValue rank = rank_of_presentation(p);
  if (rank == RankValue::finite(0)) {
    auto search = search_self_embedding(p, budget);
    v.budget_used = search.used;
    if (search.witness &&
        attempt([&] { return leafless_family(p, *search.witness, budget.family_size, fo); },
                Justification::leafless_chain)) {
      v.notes.push_back("self-embedding with root image " + to_string(search.witness->root_image));
      return v;
    }
    v.outcome = Outcome::dichotomy_holds;
    v.justification = Justification::leafless_chain;
    return v;
  }

  if (auto ev = check_condition1(p, budget.family_size)) {
    if (attempt([&] { return branch_swap_family(p, ev->branch, ev->sibling_shapes, fo); },
                Justification::condition_one)) {
      return v;
    }
  }
  auto search = search_self_embedding(p, budget);
  v.budget_used.root_images_tried += search.used.root_images_tried;
  v.budget_used.exhausted = v.budget_used.exhausted || search.used.exhausted;
  if (search.witness) {
    const std::size_t m = rank.value();
    if (attempt([&] { return tail(path_attach_family(p, *search.witness, m + budget.family_size, fo), m); },
                Justification::complement_ray)) {
      v.notes.push_back("self-embedding with root image " + to_string(search.witness->root_image));
      return v;
    }
  }
  if (auto c3 = check_condition3(p, budget)) {
    v.outcome = Outcome::dichotomy_holds;
    v.justification = Justification::finite_branches;
    if (c3->annotation) v.notes.push_back(*c3->annotation);
    return v;
  }
  v.notes.push_back("no condition established within budget");
  return v;
}

}  // namespace arbor
