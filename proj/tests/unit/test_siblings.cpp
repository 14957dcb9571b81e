#include "doctest.h"

#include "arbor/certificates.hpp"
#include "arbor/decomposition.hpp"
#include "arbor/siblings.hpp"

using namespace arbor;

namespace {

SelfEmbedding binary_through_sibling() {
  const auto& t = gallery_presentation("binary");
  const auto& s = gallery_presentation("binary_sibling");
  auto into_s = *downward_rule(std::make_shared<const Simulation>(t, s, true), Address{{1, 0}});
  auto back = *downward_rule(std::make_shared<const Simulation>(s, t, true), {});
  return SelfEmbedding(t, compose(back, into_s));
}

GeneratorError::Kind failure(const std::function<void()>& run) {
  try {
    run();
  } catch (const GeneratorError& e) {
    return e.kind();
  }
  FAIL("expected GeneratorError");
  return GeneratorError::Kind::not_applicable;
}

void require_valid(const SiblingFamily& fam) {
  auto check = validate_family(fam);
  INFO(check.reason);
  CHECK(check.ok);
}

const char* kStarOnDoubleRay =
    "state m { a:1 b:1 s:1 } state a { a:1 } state b { b:1 } state s { p:w } state p { l:1 } "
    "state l { } root m";

std::vector<Shape> star_siblings(const Shape& b, std::uint64_t count) {
  auto site = find_augment_site(b);
  REQUIRE(site.has_value());
  std::vector<Shape> out;
  for (std::uint64_t k = 0; k < count; ++k) out.push_back(augment(b, site->node, site->extra, k));
  return out;
}

}  // namespace

TEST_CASE("gallery records its expected properties") {
  REQUIRE(gallery().size() == 6);
  for (const auto& g : gallery()) {
    INFO(g.name);
    CHECK(rank_of_presentation(g.presentation) == g.rank);
    CHECK(end_category(g.presentation) == g.ends);
    CHECK(classify_core(g.presentation).core_classes.size() == g.core_classes);
  }
  CHECK(gallery_presentation("binary").state_count() == 2);
  CHECK(end_category(gallery_presentation("comb")) == EndCategory::one_end);
  CHECK(rank_of_presentation(gallery_presentation("comb")) == RankValue::omega());
  CHECK(rank_of_presentation(gallery_presentation("double_ray")) == RankValue::finite(0));
}

TEST_CASE("leafless family on the binary tree") {
  const auto& t = gallery_presentation("binary");
  auto fam = leafless_family(t, binary_through_sibling(), 3);
  REQUIRE(fam.members.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) CHECK(max_leaf_distance_of(fam.members[i]) == i + 1);
  CHECK(fam.pairs.size() == 3);
  for (const auto& pc : fam.pairs) {
    REQUIRE(pc.certificate.has_value());
    CHECK(std::holds_alternative<MaxLeafDistanceMismatch>(*pc.certificate));
  }
  require_valid(fam);

  auto one = leafless_family(t, binary_through_sibling(), 1);
  CHECK(one.members.size() == 1);
  CHECK(one.pairs.empty());
}

TEST_CASE("leafless family errors") {
  const auto& d = gallery_presentation("double_ray");
  auto shift = *downward_rule(std::make_shared<const Simulation>(d, d, true), {});
  CHECK(failure([&] { leafless_family(d, SelfEmbedding(d, shift), 2); }) ==
        GeneratorError::Kind::witness_surjective_at_depth);
  const auto& c = gallery_presentation("comb");
  auto id = *downward_rule(std::make_shared<const Simulation>(c, c, true), {});
  CHECK(failure([&] { leafless_family(c, SelfEmbedding(c, id), 2); }) == GeneratorError::Kind::not_leafless);
}

TEST_CASE("path attach family") {
  const auto& t = gallery_presentation("binary");
  auto fam = path_attach_family(t, binary_through_sibling(), 4);
  REQUIRE(fam.members.size() == 4);
  for (const auto& pc : fam.pairs) CHECK(pc.certificate.has_value());
  require_valid(fam);

  // Rank 1: pairs involving the length-1 path are left uncertified.
  auto leafy = parse_dsl("state r { q:2 t:1 } state q { q:2 } state t { } root r");
  auto f = self_embedding_at(leafy, Address{{0, 0}});
  REQUIRE(f.has_value());
  auto low = path_attach_family(leafy, *f, 3);
  REQUIRE(low.members.size() == 3);
  for (const auto& pc : low.pairs) {
    bool above = pc.first >= 1 && pc.second >= 1;
    CHECK(pc.certificate.has_value() == above);
  }
  require_valid(low);
}

TEST_CASE("path attach family errors") {
  auto path = parse_dsl("state a { b:1 } state b { c:1 } state c { } root a");
  auto id = *downward_rule(std::make_shared<const Simulation>(path, path, true), {});
  CHECK(failure([&] { path_attach_family(path, SelfEmbedding(path, id), 3); }) ==
        GeneratorError::Kind::no_complement_ray_evidence);
  const auto& c = gallery_presentation("comb");
  auto cid = *downward_rule(std::make_shared<const Simulation>(c, c, true), {});
  CHECK(failure([&] { path_attach_family(c, SelfEmbedding(c, cid), 3); }) == GeneratorError::Kind::infinite_rank);
}

TEST_CASE("branch swap family: star of paths on a double ray") {
  auto p = parse_dsl(kStarOnDoubleRay);
  auto b = leaf_representation(p).branches.at(0).shape;
  auto fam = branch_swap_family(p, b, star_siblings(b, 4));
  REQUIRE(fam.members.size() == 4);
  for (const auto& pc : fam.pairs) {
    REQUIRE(pc.certificate.has_value());
    CHECK(std::holds_alternative<BranchProfileMismatch>(*pc.certificate));
  }
  require_valid(fam);
}

TEST_CASE("branch swap family: degenerate and bad inputs") {
  auto p = parse_dsl("state m { a:1 b:1 t:1 } state a { a:1 } state b { b:1 } state t { } root m");
  auto b = leaf_representation(p).branches.at(0).shape;
  auto single = branch_swap_family(p, b, {b});
  CHECK(single.members.size() == 1);
  CHECK(single.pairs.empty());

  auto star = parse_dsl(kStarOnDoubleRay);
  auto sb = leaf_representation(star).branches.at(0).shape;
  CHECK(failure([&] { branch_swap_family(star, sb, {sb, sb}); }) ==
        GeneratorError::Kind::shapes_not_pairwise_distinct);
  Shape lone_edge;
  lone_edge.set_root(lone_edge.add({{lone_edge.root(), Multiplicity::finite(1)}}));
  CHECK(failure([&] { branch_swap_family(star, sb, {sb, lone_edge}); }) == GeneratorError::Kind::evidence_missing);
  CHECK(failure([&] { branch_swap_family(gallery_presentation("comb"), sb, {sb}); }) ==
        GeneratorError::Kind::not_applicable);
}

TEST_CASE("star family") {
  auto three = star_family(3);
  REQUIRE(three.members.size() == 3);
  for (std::size_t k = 0; k < 3; ++k) {
    const auto& m = three.members[k];
    std::uint64_t pendant = 0;
    for (const auto& slot : m.state(m.root()).slots) {
      if (m.state(slot.state).slots.empty()) pendant += slot.multiplicity.value();
    }
    CHECK(pendant == k);
    auto profile = degree_profile(three.members[k]);
    CHECK(profile.at(Multiplicity::finite(1)) == Multiplicity::omega());
    CHECK(end_category(three.members[k]) == EndCategory::zero_ends);
    CHECK(rank_of_presentation(three.members[k]) == RankValue::finite(3));
  }
  require_valid(three);
  for (const auto& ev : three.evidence) {
    CHECK(verify_witness(ev.member_to_base, three.members[&ev - three.evidence.data()], three.base, 4).ok);
    CHECK(verify_witness(ev.base_to_member, three.base, three.members[&ev - three.evidence.data()], 4).ok);
  }
  auto ten = star_family(10);
  CHECK(ten.members.size() == 10);
  CHECK(ten.pairs.size() == 45);
  for (const auto& pc : ten.pairs) CHECK(pc.certificate.has_value());
  require_valid(ten);
}

TEST_CASE("every generated witness verifies and respects the core at depth 12") {
  std::vector<SiblingFamily> families{
      leafless_family(gallery_presentation("binary"), binary_through_sibling(), 4),
      path_attach_family(gallery_presentation("binary"), binary_through_sibling(), 3),
      star_family(4),
  };
  auto star = parse_dsl(kStarOnDoubleRay);
  auto b = leaf_representation(star).branches.at(0).shape;
  families.push_back(branch_swap_family(star, b, star_siblings(b, 3)));
  for (const auto& fam : families) {
    for (std::size_t i = 0; i < fam.members.size(); ++i) {
      const auto& ev = fam.evidence[i];
      CHECK(ev.member_to_base.depth >= 12);
      CHECK(verify_witness(ev.member_to_base, fam.members[i], fam.base, 12).ok);
      CHECK(verify_witness(ev.base_to_member, fam.base, fam.members[i], 12).ok);
      CHECK(core_respecting(ev.member_to_base, fam.members[i], fam.base, 12));
      CHECK(core_respecting(ev.base_to_member, fam.base, fam.members[i], 12));
    }
  }
}
