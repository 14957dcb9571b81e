#include "doctest.h"

#include <filesystem>
#include <map>

#include "arbor/siblings.hpp"
#include "arbor/unfold.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace arbor;

namespace {

const char* kBinary = "state r { q:2 } state q { q:2 } root r";
const char* kRay = "state a { a:1 } root a";
const char* kStarP2 = "state r { m:w } state m { l:1 } state l { } root r";

ParseError::Kind parse_failure(const char* text) {
  try {
    parse_dsl(text);
  } catch (const ParseError& e) {
    return e.kind();
  }
  FAIL("expected ParseError");
  return ParseError::Kind::syntax;
}

std::vector<TreePresentation> corpus() {
  std::vector<TreePresentation> out;
  for (const auto& entry : std::filesystem::directory_iterator(ARBOR_CORPUS_DIR)) {
    if (entry.path().extension() == ".tree") out.push_back(read_presentation_file(entry.path()));
  }
  return out;
}

}  // namespace

TEST_CASE("parse_dsl examples") {
  auto b = parse_dsl(kBinary);
  auto u = unfold(b, 3);
  const auto& t = u.tree.tree;
  CHECK(t.degree(u.tree.root) == 2);
  for (Vertex v = 0; v < u.size(); ++v) {
    if (v != u.tree.root && u.at(v).depth < 3) CHECK(t.degree(v) == 3);
  }
  auto single = parse_dsl("state r { } root r");
  CHECK(unfold(single, 5).size() == 1);
  auto err = parse_failure("state r { x:1 } root r");
  CHECK(err == ParseError::Kind::undefined_state);
}

TEST_CASE("parse errors carry kind and position") {
  CHECK(parse_failure("state r { } ") == ParseError::Kind::no_root);
  CHECK(parse_failure("state r { r:0 } root r") == ParseError::Kind::bad_multiplicity);
  CHECK(parse_failure("state r { r:-1 } root r") == ParseError::Kind::bad_multiplicity);
  CHECK(parse_failure("state r { r:x1 } root r") == ParseError::Kind::bad_multiplicity);
  CHECK(parse_failure("state r { r 1 } root r") == ParseError::Kind::syntax);
  CHECK(parse_failure("state r { } state r { } root r") == ParseError::Kind::duplicate_state);
  CHECK(parse_failure("state r { } root z") == ParseError::Kind::undefined_state);
  try {
    parse_dsl("state r {\n  x:1 }\nroot r");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(e.column() == 3);
    CHECK(e.is_validation());
  }
}

TEST_CASE("comments, commas and whitespace are accepted") {
  auto p = parse_dsl("# double ray\nstate m { a:1, b:1 }  # junction\nstate a{a:1}\nstate b { b:1 }\nroot m\n");
  CHECK(p == parse_dsl("state m { a:1 b:1 } state a { a:1 } state b { b:1 } root m"));
}

TEST_CASE("unfold examples") {
  auto ray = unfold(parse_dsl(kRay), 4);
  CHECK(ray.size() == 5);
  CHECK(isomorphic(ray.tree.tree, make_path(5)));
  for (std::size_t d = 0; d <= 6; ++d) {
    CHECK(unfold(parse_dsl(kBinary), d).size() == (std::size_t{2} << d) - 1);
  }
  auto star = unfold(parse_dsl(kStarP2), UnfoldOptions{.depth = 2, .omega_width = 3});
  CHECK(star.size() == 7);
  CHECK(star.tree.tree.degree(star.tree.root) == 3);
  auto spider = FiniteTree::from_edges(std::vector<FiniteTree::Edge>{
      {"c", "a1"}, {"a1", "a2"}, {"c", "b1"}, {"b1", "b2"}, {"c", "d1"}, {"d1", "d2"}});
  CHECK(isomorphic(star.tree.tree, spider));
  CHECK(unfold(parse_dsl(kStarP2), UnfoldOptions{.depth = 2, .omega_width = 5}).size() == 11);
  CHECK_THROWS_AS(unfold(parse_dsl(kBinary), UnfoldOptions{.depth = 20, .max_vertices = 1000}),
                  BudgetExceeded);
}

TEST_CASE("contains_ray_state examples") {
  CHECK(contains_ray_state(parse_dsl(kRay), 0));
  auto s = parse_dsl(kStarP2);
  CHECK_FALSE(contains_ray_state(s, *s.find("r")));
  auto b = parse_dsl(kBinary);
  CHECK(contains_ray_state(b, *b.find("q")));
}

TEST_CASE("occurrence_count examples") {
  auto b = parse_dsl(kBinary);
  CHECK(occurrence_count(b, {*b.find("r"), false}) == Multiplicity::finite(1));
  CHECK(occurrence_count(b, {*b.find("q"), true}) == Multiplicity::omega());
  CHECK(occurrence_count(b, {*b.find("q"), false}).is_zero());
  auto p = parse_dsl("state r { a:2 } state a { } root r");
  CHECK(occurrence_count(p, {*p.find("a"), false}) == Multiplicity::finite(2));
}

TEST_CASE("serialize examples and round trips") {
  CHECK(serialize(parse_dsl("state r { } root r")) == "state r { } root r\n");
  CHECK(serialize(parse_dsl(kStarP2)) == "state r { m:w } state m { l:1 } state l { } root r\n");
  for (const auto& g : gallery()) CHECK(parse_dsl(serialize(g.presentation)) == g.presentation);
  for (const auto& p : corpus()) CHECK(parse_dsl(serialize(p)) == p);
}

TEST_CASE("addresses round trip through text") {
  Address a{{0, 1}, {2, 7}};
  CHECK(to_string(a) == "/0.1/2.7");
  CHECK(parse_address("/0.1/2.7") == a);
  CHECK(parse_address("/").empty());
  CHECK_THROWS_AS(parse_address("0.1"), std::invalid_argument);
  CHECK_THROWS_AS(parse_address("/0."), std::invalid_argument);
  CHECK_THROWS_AS(parse_address("/0.1/"), std::invalid_argument);
}

TEST_CASE("random presentations: unfoldings nest") {
  gen::Rng rng(21);
  for (int iter = 0; iter < 100; ++iter) {
    auto p = gen::random_presentation(rng);
    for (std::size_t d = 0; d < 5; ++d) {
      auto small = unfold(p, UnfoldOptions{.depth = d, .max_vertices = 2'000'000});
      auto big = unfold(p, UnfoldOptions{.depth = d + 1, .max_vertices = 2'000'000});
      for (Vertex v = 0; v < small.size(); ++v) {
        auto w = big.find(small.address(v));
        REQUIRE(w.has_value());
        CHECK(big.at(*w).state == small.at(v).state);
        CHECK(big.at(*w).depth == small.at(v).depth);
        CHECK(big.at(*w).cls == small.at(v).cls);
      }
    }
  }
}

TEST_CASE("random presentations: ray states match the pumping bound") {
  gen::Rng rng(22);
  for (int iter = 0; iter < 200; ++iter) {
    auto p = gen::random_presentation(rng);
    const std::size_t n = p.state_count();
    for (std::size_t s = 0; s < n; ++s) {
      auto u = unfold(p.with_root(s), UnfoldOptions{.depth = n + 1, .omega_width = 1});
      bool deep = false;
      for (const auto& v : u.vertices) deep = deep || v.depth == n + 1;
      CHECK(contains_ray_state(p, s) == deep);
    }
  }
}

TEST_CASE("random presentations: finite occurrence counts stabilise") {
  gen::Rng rng(23);
  for (int iter = 0; iter < 200; ++iter) {
    auto p = gen::random_presentation(rng);
    const std::size_t n = p.state_count();
    // A class path can pass through a state twice, once on each side of
    // the up-ray flag, so finite classes sit at depth below 2n.
    auto count = [&](std::size_t d) {
      std::map<OccurrenceClass, std::uint64_t> c;
      for (const auto& v : unfold(p, UnfoldOptions{.depth = d, .omega_width = 1, .max_vertices = 2'000'000}).vertices) ++c[v.cls];
      return c;
    };
    auto at = count(2 * n), next = count(2 * n + 1);
    ClassGraph g(p);
    auto counts = occurrence_counts(g);
    for (std::size_t i = 0; i < g.size(); ++i) {
      CHECK(counts[i] == occurrence_count(p, g.node(i)));
      if (!counts[i].is_finite()) continue;
      CHECK(at[g.node(i)] == counts[i].value());
      CHECK(next[g.node(i)] == counts[i].value());
    }
  }
}
