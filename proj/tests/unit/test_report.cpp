#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "arbor/analyzer.hpp"
#include "arbor/report.hpp"

using namespace arbor;

namespace {

TreePresentation corpus(const std::string& name) {
  return read_presentation_file(std::filesystem::path(ARBOR_CORPUS_DIR) / (name + ".tree"));
}

std::size_t count(const std::string& text, const std::regex& re) {
  return static_cast<std::size_t>(std::distance(std::sregex_iterator(text.begin(), text.end(), re), std::sregex_iterator()));
}

const std::regex kNode(R"(^  "[^"]+" \[label=)", std::regex::multiline);
const std::regex kEdge(R"(^  "[^"]+" -> "[^"]+";)", std::regex::multiline);
const std::regex kCoreNode(R"(^  "[^"]+" \[label="[^"]+", style=filled)", std::regex::multiline);

}  // namespace

TEST_CASE("rank reports") {
  auto b = rank_json(corpus("binary"));
  CHECK(b["rank"] == Json{{"finite", 0}});
  CHECK(b["ends"] == "ManyEnds");
  CHECK(b["core_classes"].size() == 2);
  CHECK(rank_json(corpus("ray"))["rank"] == "omega");
  CHECK(rank_json(corpus("path5"))["rank"] == Json{{"finite", 3}});
  auto text = rank_text(corpus("path5"));
  CHECK(text.find("rank: Finite(3)") != std::string::npos);
  CHECK(text.find("core classes: (none)") != std::string::npos);
}

TEST_CASE("decompose reports") {
  auto d = decompose_json(corpus("double_ray_pendant"));
  CHECK(d["branches"].size() == 1);
  CHECK(d["branch_count"] == 1);
  CHECK(d["max_leaf_distance"] == 1);
  CHECK(d["branches"][0]["occurrences"] == 1);
  CHECK(decompose_json(corpus("binary"))["branches"].empty());
  CHECK(decompose_json(corpus("double_ray_all_pendants"))["branch_count"] == "omega");
  CHECK_THROWS_AS(decompose_json(corpus("comb")), NoCore);
  CHECK(decompose_text(corpus("double_ray_pendant")).find("branch") != std::string::npos);
}

TEST_CASE("render examples") {
  auto binary = render_dot(corpus("binary"), {.depth = 3});
  CHECK(binary.rfind("digraph unfolding {", 0) == 0);
  CHECK(count(binary, kNode) == 15);
  CHECK(count(binary, kEdge) == 14);
  auto ray = render_dot(corpus("ray"), {.depth = 5});
  CHECK(count(ray, kNode) == 6);
  CHECK(count(ray, kEdge) == 5);
  auto pendant = render_dot(corpus("double_ray_pendant"), {.depth = 4});
  CHECK(count(pendant, kNode) == 10);
  CHECK(count(pendant, kCoreNode) == 9);
  auto js = render_json(corpus("double_ray_pendant"), {.depth = 4});
  std::size_t core = 0;
  for (const auto& v : js["vertices"]) core += v["core"].get<bool>() ? 1 : 0;
  CHECK(js["vertices"].size() == 10);
  CHECK(core == 9);
  CHECK(render_dot(corpus("binary"), {.depth = 3}) == binary);
}

TEST_CASE("verdict reports") {
  auto v = analyze(corpus("binary"));
  auto text = verdict_text(v);
  CHECK(text.rfind("Infinite (Theorem 3.2)\n", 0) == 0);
  auto js = verdict_json(v);
  CHECK(js["outcome"] == "Infinite");
  CHECK(js["justification"] == "Theorem 3.2");
  CHECK(js["family"]["members"].size() >= 3);
  CHECK(verdict_text(analyze(corpus("path7"))).rfind("ExactlyOne (finite tree)\n", 0) == 0);
  CHECK(verdict_text(analyze(corpus("star"))).rfind("Infinite (condition 1, Lemma 3.3)\n", 0) == 0);
}

TEST_CASE("family manifest and directory") {
  auto fam = star_family(4);
  auto m = family_manifest(fam);
  CHECK(m["construction"] == fam.construction);
  CHECK(m["members"].size() == 4);
  CHECK(m["pairs"].size() == 6);
  for (const auto& pair : m["pairs"]) CHECK(pair["certified"] == true);
  auto dir = std::filesystem::temp_directory_path() / "arbor_report_test";
  std::filesystem::remove_all(dir);
  write_family(fam, dir);
  CHECK(std::filesystem::exists(dir / "base.tree"));
  CHECK(std::filesystem::exists(dir / "manifest.json"));
  for (const auto& member : m["members"]) {
    auto path = dir / member["file"].get<std::string>();
    REQUIRE(std::filesystem::exists(path));
    CHECK(read_presentation_file(path) == fam.members[&member - &m["members"][0]]);
  }
  std::ifstream in(dir / "manifest.json");
  std::stringstream buf;
  buf << in.rdbuf();
  CHECK(Json::parse(buf.str()) == m);
  std::filesystem::remove_all(dir);
  CHECK(family_text(fam).find(fam.labels[1]) != std::string::npos);
}
