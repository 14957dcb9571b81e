#include "doctest.h"

#include <filesystem>

#include "arbor/certificates.hpp"
#include "arbor/siblings.hpp"
#include "generators.hpp"

using namespace arbor;

namespace {

std::vector<TreePresentation> corpus() {
  std::vector<TreePresentation> out;
  for (const auto& entry : std::filesystem::directory_iterator(ARBOR_CORPUS_DIR)) {
    if (entry.path().extension() == ".tree") out.push_back(read_presentation_file(entry.path()));
  }
  return out;
}

SelfEmbedding binary_through_sibling() {
  const auto& t = gallery_presentation("binary");
  const auto& s = gallery_presentation("binary_sibling");
  auto into_s = *downward_rule(std::make_shared<const Simulation>(t, s, true), Address{{1, 0}});
  auto back = *downward_rule(std::make_shared<const Simulation>(s, t, true), {});
  return SelfEmbedding(t, compose(back, into_s));
}

}  // namespace

TEST_CASE("degree profile separates the binary tree from its pruned sibling") {
  const auto& t = gallery_presentation("binary");
  const auto& s = gallery_presentation("binary_sibling");
  auto two = Multiplicity::finite(2);
  CHECK(degree_profile(t).at(two) == Multiplicity::finite(1));
  CHECK(degree_profile(s).at(two) == Multiplicity::finite(2));
  NonIsoCertificate c = DegreeProfileMismatch{two, Multiplicity::finite(1), Multiplicity::finite(2)};
  CHECK(check_certificate(c, t, s));
  CHECK_FALSE(check_certificate(c, s, t));
  CHECK_FALSE(check_certificate(c, t, t));
  auto found = find_certificate(t, s);
  REQUIRE(found.has_value());
  CHECK(check_certificate(*found, t, s));
}

TEST_CASE("no certificate holds between a tree and itself") {
  const auto& t = gallery_presentation("binary");
  std::vector<NonIsoCertificate> all{
      RankMismatch{RankValue::finite(0), RankValue::finite(0)},
      RankMismatch{RankValue::finite(0), RankValue::finite(1)},
      MaxLeafDistanceMismatch{0, 1},
      MaxLeafDistanceMismatch{0, 0},
      DegreeProfileMismatch{Multiplicity::finite(3), Multiplicity::omega(), Multiplicity::omega()},
      DegreeProfileMismatch{Multiplicity::finite(2), Multiplicity::finite(1), Multiplicity::finite(2)},
      BranchProfileMismatch{"(())", Multiplicity::finite(1), Multiplicity{}},
  };
  for (const auto& c : all) CHECK_FALSE(check_certificate(c, t, t));
  for (const auto& p : corpus()) CHECK_FALSE(find_certificate(p, p).has_value());
}

TEST_CASE("leafless family members differ in max leaf distance") {
  auto fam = leafless_family(gallery_presentation("binary"), binary_through_sibling(), 3);
  REQUIRE(fam.members.size() == 3);
  NonIsoCertificate c = MaxLeafDistanceMismatch{2, 3};
  CHECK(check_certificate(c, fam.members[1], fam.members[2]));
  CHECK_FALSE(check_certificate(c, fam.members[0], fam.members[2]));
}

TEST_CASE("certificates survive re-presentation and never separate isomorphic copies") {
  gen::Rng rng(61);
  auto check_family = [&](const SiblingFamily& fam) {
    for (const auto& pc : fam.pairs) {
      if (!pc.certificate) continue;
      auto a = gen::isomorphic_variant(fam.members[pc.first], rng);
      auto b = gen::isomorphic_variant(fam.members[pc.second], rng);
      CHECK(check_certificate(*pc.certificate, a, b));
    }
  };
  check_family(leafless_family(gallery_presentation("binary"), binary_through_sibling(), 4));
  check_family(star_family(5));
  for (const auto& p : corpus()) {
    for (int k = 0; k < 5; ++k) {
      auto v = gen::isomorphic_variant(p, rng);
      CHECK_FALSE(find_certificate(p, v).has_value());
      CHECK(degree_profile(p) == degree_profile(v));
      CHECK(rank_of_presentation(p) == rank_of_presentation(v));
      CHECK(branch_profile_of(p) == branch_profile_of(v));
    }
  }
  for (int iter = 0; iter < 200; ++iter) {
    auto p = gen::random_presentation(rng);
    auto v = gen::isomorphic_variant(p, rng);
    CHECK_FALSE(find_certificate(p, v).has_value());
  }
}

TEST_CASE("describe and kind names") {
  NonIsoCertificate c = MaxLeafDistanceMismatch{2, 3};
  CHECK(kind_name(c) == "MaxLeafDistanceMismatch");
  CHECK(describe(c).find('2') != std::string::npos);
  CHECK(kind_name(NonIsoCertificate{RankMismatch{RankValue::finite(1), RankValue::omega()}}) == "RankMismatch");
}
