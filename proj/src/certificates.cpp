#include "arbor/certificates.hpp"

#include <set>

#include "arbor/decomposition.hpp"
#include "arbor/shape.hpp"

namespace arbor {

std::string_view kind_name(const NonIsoCertificate& c) {
  switch (c.index()) {
    case 0: return "RankMismatch";
    case 1: return "MaxLeafDistanceMismatch";
    case 2: return "DegreeProfileMismatch";
    default: return "BranchProfileMismatch";
  }
}

std::string describe(const NonIsoCertificate& c) {
  struct {
    std::string operator()(const RankMismatch& r) const {
      return "RankMismatch(" + r.first.to_string() + ", " + r.second.to_string() + ")";
    }
    std::string operator()(const MaxLeafDistanceMismatch& m) const {
      return "MaxLeafDistanceMismatch(" + std::to_string(m.first) + ", " + std::to_string(m.second) + ")";
    }
    std::string operator()(const DegreeProfileMismatch& d) const {
      return "DegreeProfileMismatch(degree " + d.degree.to_string() + ", " + d.first.to_string() + ", " +
             d.second.to_string() + ")";
    }
    std::string operator()(const BranchProfileMismatch& b) const {
      return "BranchProfileMismatch(" + b.branch + ", " + b.first.to_string() + ", " + b.second.to_string() + ")";
    }
  } visit;
  return std::visit(visit, c);
}

std::map<Multiplicity, Multiplicity> degree_profile(const TreePresentation& p) {
  ClassGraph g(p);
  const auto counts = occurrence_counts(g);
  auto slot_sum = [&](std::size_t s) {
    Multiplicity total;
    for (const auto& slot : p.state(s).slots) total += slot.multiplicity;
    return total;
  };
  std::map<Multiplicity, Multiplicity> out;
  for (std::size_t i = 0; i < g.size(); ++i) {
    out[Multiplicity::finite(1) + slot_sum(g.node(i).state)] += counts[i];
  }
  // The root has no parent edge: move it from its class's bucket down one.
  Multiplicity& wrong = out[Multiplicity::finite(1) + slot_sum(p.root())];
  if (wrong.is_finite()) wrong = Multiplicity::finite(wrong.value() - 1);
  out[slot_sum(p.root())] += Multiplicity::finite(1);
  std::erase_if(out, [](const auto& kv) { return kv.second.is_zero(); });
  return out;
}

std::optional<std::map<std::string, Multiplicity>> branch_profile_of(const TreePresentation& p) {
  switch (end_category(p)) {
    case EndCategory::many_ends: return branch_profile(leaf_representation(p));
    case EndCategory::zero_ends: return std::map<std::string, Multiplicity>{{center_rooted_form(p), Multiplicity::finite(1)}};
    case EndCategory::one_end: break;
  }
  return std::nullopt;
}

std::optional<std::uint64_t> max_leaf_distance_of(const TreePresentation& p) {
  if (end_category(p) != EndCategory::many_ends) return std::nullopt;
  return max_leaf_distance(leaf_representation(p));
}

namespace {

Multiplicity lookup(const std::map<Multiplicity, Multiplicity>& m, Multiplicity key) {
  auto it = m.find(key);
  return it == m.end() ? Multiplicity{} : it->second;
}

Multiplicity lookup(const std::map<std::string, Multiplicity>& m, const std::string& key) {
  auto it = m.find(key);
  return it == m.end() ? Multiplicity{} : it->second;
}

}  // namespace

bool check_certificate(const NonIsoCertificate& c, const TreePresentation& p, const TreePresentation& q) {
  if (const auto* r = std::get_if<RankMismatch>(&c)) {
    return !(r->first == r->second) && rank_of_presentation(p) == r->first &&
           rank_of_presentation(q) == r->second;
  }
  if (const auto* m = std::get_if<MaxLeafDistanceMismatch>(&c)) {
    return m->first != m->second && max_leaf_distance_of(p) == m->first &&
           max_leaf_distance_of(q) == m->second;
  }
  if (const auto* d = std::get_if<DegreeProfileMismatch>(&c)) {
    return d->first != d->second && lookup(degree_profile(p), d->degree) == d->first &&
           lookup(degree_profile(q), d->degree) == d->second;
  }
  const auto& b = std::get<BranchProfileMismatch>(c);
  if (b.first == b.second) return false;
  const auto bp = branch_profile_of(p);
  const auto bq = branch_profile_of(q);
  // Both profiles must be of the same kind to be comparable.
  if (!bp || !bq || end_category(p) != end_category(q)) return false;
  return lookup(*bp, b.branch) == b.first && lookup(*bq, b.branch) == b.second;
}

std::optional<NonIsoCertificate> find_certificate(const TreePresentation& p, const TreePresentation& q) {
  const RankValue rp = rank_of_presentation(p), rq = rank_of_presentation(q);
  if (!(rp == rq)) return RankMismatch{rp, rq};
  const auto mp = max_leaf_distance_of(p), mq = max_leaf_distance_of(q);
  if (mp && mq && *mp != *mq) return MaxLeafDistanceMismatch{*mp, *mq};
  const auto dp = degree_profile(p), dq = degree_profile(q);
  std::set<Multiplicity> degrees;
  for (const auto& [d, n] : dp) degrees.insert(d);
  for (const auto& [d, n] : dq) degrees.insert(d);
  for (Multiplicity d : degrees) {
    if (lookup(dp, d) != lookup(dq, d)) return DegreeProfileMismatch{d, lookup(dp, d), lookup(dq, d)};
  }
  if (end_category(p) != end_category(q)) return std::nullopt;
  const auto bp = branch_profile_of(p), bq = branch_profile_of(q);
  if (!bp || !bq) return std::nullopt;
  std::set<std::string> keys;
  for (const auto& [k, n] : *bp) keys.insert(k);
  for (const auto& [k, n] : *bq) keys.insert(k);
  for (const auto& k : keys) {
    if (lookup(*bp, k) != lookup(*bq, k)) return BranchProfileMismatch{k, lookup(*bp, k), lookup(*bq, k)};
  }
  return std::nullopt;
}

}  // namespace arbor
