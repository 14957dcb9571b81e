#include "doctest.h"

#include <algorithm>

#include "arbor/finite_tree.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace arbor;

namespace {

FiniteTree tree(std::vector<FiniteTree::Edge> edges) { return FiniteTree::from_edges(edges); }

NotATreeReason reason_of(std::vector<FiniteTree::Edge> edges) {
  try {
    FiniteTree::from_edges(edges);
  } catch (const NotATree& e) {
    return e.reason();
  }
  FAIL("expected NotATree");
  return NotATreeReason::cycle;
}

RootedFiniteTree rooted(const FiniteTree& t, const std::string& root) { return {t, *t.find(root)}; }

}  // namespace

TEST_CASE("from_edges builds paths and rejects non-trees") {
  auto p = tree({{"a", "b"}, {"b", "c"}});
  CHECK(p.size() == 3);
  CHECK(p.edge_count() == 2);
  CHECK(reason_of({{"a", "b"}, {"b", "c"}, {"c", "a"}}) == NotATreeReason::cycle);
  CHECK(reason_of({{"a", "b"}, {"c", "d"}}) == NotATreeReason::disconnected);
  CHECK(reason_of({{"a", "b"}, {"b", "a"}}) == NotATreeReason::duplicate_edge);
  CHECK(reason_of({{"a", "a"}}) == NotATreeReason::self_loop);
  auto empty = FiniteTree::from_edges({});
  CHECK(empty.empty());
  CHECK(empty.edge_count() == 0);
}

TEST_CASE("degree_map") {
  auto d = degree_map(tree({{"a", "b"}, {"b", "c"}}));
  CHECK(d == std::map<std::string, std::size_t>{{"a", 1}, {"b", 2}, {"c", 1}});
  std::vector<std::string> lone{"v"};
  CHECK(degree_map(FiniteTree::from_edges({}, lone)) == std::map<std::string, std::size_t>{{"v", 0}});
  auto star = degree_map(make_star(3));
  CHECK(star.at("c") == 3);
  CHECK(star.at("l0") == 1);
  CHECK(star.at("l2") == 1);
}

TEST_CASE("ahu_canonical examples") {
  std::vector<std::string> lone{"v"};
  CHECK(ahu_canonical({FiniteTree::from_edges({}, lone), 0}) == "()");
  CHECK(ahu_canonical(rooted(make_star(2), "c")) == "(()())");
  auto p3 = make_path(3);
  CHECK(ahu_canonical(rooted(p3, "0")) != ahu_canonical(rooted(p3, "1")));
  CHECK_THROWS_AS(ahu_canonical({FiniteTree{}, 0}), EmptyTree);
}

TEST_CASE("ahu codes separate exactly the non-isomorphic rootings of paths") {
  for (std::size_t n = 1; n <= 6; ++n) {
    auto p = make_path(n);
    auto g = oracle::adjacency(p);
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        bool same_code = ahu_canonical({p, a}) == ahu_canonical({p, b});
        bool iso = oracle::brute_rooted_embeds(g, static_cast<int>(a), g, static_cast<int>(b));
        CHECK(same_code == iso);
      }
    }
  }
}

TEST_CASE("isomorphic examples") {
  auto p4 = make_path(4);
  auto q4 = tree({{"x", "y"}, {"z", "w"}, {"y", "z"}});
  CHECK(isomorphic(p4, q4));
  CHECK_FALSE(isomorphic(p4, make_star(3)));
  CHECK(isomorphic(FiniteTree{}, FiniteTree{}));
}

TEST_CASE("isomorphic matches brute force on all trees up to 8 vertices") {
  auto all = oracle::all_free_trees(8);
  REQUIRE(all.size() == 48);
  std::vector<FiniteTree> trees;
  for (const auto& g : all) {
    std::vector<std::pair<Vertex, Vertex>> edges;
    for (std::size_t v = 0; v < g.size(); ++v) {
      for (int w : g[v]) {
        if (static_cast<std::size_t>(w) > v) edges.emplace_back(v, w);
      }
    }
    trees.push_back(FiniteTree::from_index_edges(g.size(), edges));
  }
  gen::Rng rng(7);
  for (std::size_t i = 0; i < trees.size(); ++i) {
    for (std::size_t j = 0; j < trees.size(); ++j) {
      auto other = gen::relabel(trees[j], rng);
      CHECK(isomorphic(trees[i], other) == oracle::brute_isomorphic(all[i], oracle::adjacency(other)));
    }
  }
}

namespace {

std::vector<std::string> all_codes(const FiniteTree& t) {
  std::vector<std::string> codes;
  for (std::size_t v = 0; v < t.size(); ++v) codes.push_back(ahu_canonical({t, v}));
  std::sort(codes.begin(), codes.end());
  return codes;
}

}  // namespace

TEST_CASE("random trees are trees and codes are relabeling invariant") {
  gen::Rng rng(11);
  for (int iter = 0; iter < 200; ++iter) {
    std::size_t n = 1 + rng() % 60;
    auto t = gen::random_tree(rng, n);
    CHECK(t.edge_count() == n - 1);
    CHECK(oracle::connected_acyclic(oracle::adjacency(t)));
    auto u = gen::relabel(t, rng);
    CHECK(all_codes(t) == all_codes(u));
    CHECK(isomorphic(t, u));
  }
}

TEST_CASE("isomorphic behaves as an equivalence relation") {
  gen::Rng rng(12);
  std::vector<FiniteTree> sample;
  for (int i = 0; i < 40; ++i) sample.push_back(gen::random_tree(rng, 1 + rng() % 7));
  for (const auto& a : sample) {
    CHECK(isomorphic(a, a));
    for (const auto& b : sample) {
      CHECK(isomorphic(a, b) == isomorphic(b, a));
      if (!isomorphic(a, b)) continue;
      for (const auto& c : sample) {
        if (isomorphic(b, c)) CHECK(isomorphic(a, c));
      }
    }
  }
}
