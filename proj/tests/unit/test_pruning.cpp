#include "doctest.h"

#include <filesystem>

#include "arbor/pruning.hpp"
#include "arbor/siblings.hpp"
#include "arbor/unfold.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace arbor;

namespace {

const char* kBinary = "state r { q:2 } state q { q:2 } root r";
const char* kRay = "state a { a:1 } root a";
const char* kStarP2 = "state r { m:w } state m { l:1 } state l { } root r";
const char* kDoubleRay = "state m { a:1, b:1 } state a { a:1 } state b { b:1 } root m";
const char* kComb = "state c { c:1, t:1 } state t { } root c";

std::set<std::string> ids(const FiniteTree& t) {
  std::set<std::string> out;
  for (Vertex v = 0; v < t.size(); ++v) out.insert(t.id(v));
  return out;
}

std::set<std::string> ids(const FiniteTree& t, const std::vector<Vertex>& vs) {
  std::set<std::string> out;
  for (auto v : vs) out.insert(t.id(v));
  return out;
}

// Addresses with every copy index below 2, up to the given depth.
std::vector<Address> addresses(const TreePresentation& p, std::size_t depth) {
  std::vector<Address> out{{}};
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out[i].size() == depth) continue;
    const auto& slots = p.state(state_at(p, out[i])).slots;
    for (std::uint32_t k = 0; k < slots.size(); ++k) {
      for (std::uint64_t c = 0; c < slots[k].multiplicity.capped(2).value(); ++c) {
        auto a = out[i];
        a.push_back({k, c});
        out.push_back(std::move(a));
      }
    }
  }
  return out;
}

std::vector<TreePresentation> corpus() {
  std::vector<TreePresentation> out;
  for (const auto& entry : std::filesystem::directory_iterator(ARBOR_CORPUS_DIR)) {
    if (entry.path().extension() == ".tree") out.push_back(read_presentation_file(entry.path()));
  }
  return out;
}

}  // namespace

TEST_CASE("prune_step examples") {
  auto p = prune_step(FiniteTree::from_edges(std::vector<FiniteTree::Edge>{{"a", "b"}, {"b", "c"}}));
  CHECK(ids(p) == std::set<std::string>{"b"});
  CHECK(prune_step(make_path(1)).empty());
  CHECK(ids(prune_step(make_star(3))) == std::set<std::string>{"c"});
  CHECK(prune_step(FiniteTree{}).empty());
}

TEST_CASE("pruning_trace examples") {
  auto p5 = make_path(5);
  auto r = pruning_trace(p5);
  CHECK(r.rank == RankValue::finite(3));
  REQUIRE(r.trace.rounds.size() == 3);
  CHECK(ids(p5, r.trace.rounds[0]) == std::set<std::string>{"0", "4"});
  CHECK(ids(p5, r.trace.rounds[1]) == std::set<std::string>{"1", "3"});
  CHECK(ids(p5, r.trace.rounds[2]) == std::set<std::string>{"2"});
  CHECK(pruning_trace(make_path(2)).rank == RankValue::finite(1));
  CHECK(pruning_trace(FiniteTree{}).rank == RankValue::finite(0));
  for (int n = 1; n <= 50; ++n) {
    int expected = oracle::strip_rank(oracle::path(n));
    CHECK(expected == (n + 1) / 2);
    CHECK(pruning_trace(make_path(n)).rank == RankValue::finite(expected));
  }
}

TEST_CASE("random trees: traces match stripping and every stage is a tree") {
  gen::Rng rng(31);
  for (int iter = 0; iter < 300; ++iter) {
    auto t = gen::random_tree(rng, 1 + rng() % 120);
    auto r = pruning_trace(t);
    auto expected = oracle::strip_rounds(oracle::adjacency(t));
    for (Vertex v = 0; v < t.size(); ++v) CHECK(r.trace.removal_round[v] == static_cast<std::size_t>(expected[v]));
    std::size_t previous = t.size() + 1;
    for (std::size_t k = 0; k <= r.trace.rounds.size(); ++k) {
      auto stage = pruning_stage(t, r.trace, k);
      CHECK(oracle::connected_acyclic(oracle::adjacency(stage)));
      CHECK(stage.size() < previous);
      previous = stage.size();
      if (k < r.trace.rounds.size()) {
        CHECK_FALSE(r.trace.rounds[k].empty());
        for (auto v : r.trace.rounds[k]) CHECK(stage.degree(*stage.find(t.id(v))) <= 1);
      }
    }
    CHECK(previous == 0);
  }
}

TEST_CASE("classify_core examples") {
  auto d = parse_dsl(kDoubleRay);
  CHECK(classify_core(d).core_classes.size() == ClassGraph(d).size());
  CHECK(classify_core(parse_dsl(kRay)).core_classes.empty());
  auto b = parse_dsl(kBinary);
  CHECK(classify_core(b).core_classes.size() == ClassGraph(b).size());
}

TEST_CASE("end_category examples") {
  CHECK(end_category(parse_dsl(kStarP2)) == EndCategory::zero_ends);
  CHECK(end_category(parse_dsl(kComb)) == EndCategory::one_end);
  CHECK(end_category(parse_dsl(kBinary)) == EndCategory::many_ends);
}

TEST_CASE("rank_of_presentation examples") {
  CHECK(rank_of_presentation(parse_dsl(kRay)) == RankValue::omega());
  CHECK(rank_of_presentation(parse_dsl(kBinary)) == RankValue::finite(0));
  CHECK(rank_of_presentation(parse_dsl(kStarP2)) == RankValue::finite(3));
  for (const auto& g : gallery()) CHECK(rank_of_presentation(g.presentation) == g.rank);
}

TEST_CASE("core classification agrees with stripping on random presentations") {
  gen::Rng rng(32);
  for (int iter = 0; iter < 60; ++iter) {
    auto p = gen::random_presentation(rng);
    auto core = classify_core(p);
    for (const auto& a : addresses(p, 3)) {
      bool predicted = core.core_classes.count(class_at(p, a)) > 0;
      CHECK(predicted == oracle::core_by_stripping(p, a));
    }
  }
}

TEST_CASE("removal rounds agree with stripping") {
  gen::Rng rng(33);
  auto check = [](const TreePresentation& p) {
    const std::size_t n = p.state_count();
    for (const auto& a : addresses(p, 3)) {
      auto round = removal_round(p, a);
      auto g = oracle::ball(p, a, a.size() + n + 2);
      int stripped = oracle::strip_rounds(g)[0];
      if (round) {
        CHECK(*round == static_cast<std::uint64_t>(stripped));
      } else {
        CHECK(stripped >= static_cast<int>(a.size() + n + 2));
      }
    }
  };
  for (int iter = 0; iter < 60; ++iter) check(gen::random_presentation(rng));
  for (const auto& p : corpus()) check(p);
}

TEST_CASE("rayless ranks agree with stripping the whole unfolding") {
  gen::Rng rng(34);
  int seen = 0;
  while (seen < 100) {
    auto p = gen::random_presentation(rng);
    if (end_category(p) != EndCategory::zero_ends) continue;
    ++seen;
    CHECK(rank_of_presentation(p) == RankValue::finite(oracle::rayless_rank_by_stripping(p)));
  }
}

TEST_CASE("ends categories: few ends means no core, leafless means rank zero") {
  gen::Rng rng(35);
  for (int iter = 0; iter < 300; ++iter) {
    auto p = gen::random_presentation(rng);
    auto e = end_category(p);
    auto core = classify_core(p);
    if (e != EndCategory::many_ends) CHECK(core.core_classes.empty());
    if (e == EndCategory::one_end) CHECK(rank_of_presentation(p) == RankValue::omega());
    if (e == EndCategory::many_ends) CHECK_FALSE(core.core_classes.empty());
  }
  for (const char* text : {kBinary, kDoubleRay}) {
    auto p = parse_dsl(text);
    CHECK(rank_of_presentation(p) == RankValue::finite(0));
    const std::size_t depth = 7;
    auto u = unfold(p, depth);
    auto pruned = prune_step(u.tree.tree);
    for (Vertex v = 0; v < u.size(); ++v) {
      if (u.at(v).depth < depth) CHECK(pruned.find(u.tree.tree.id(v)).has_value());
    }
  }
}
