// arbor-rank: rank, decomposition, sibling families and verdicts for
// finitely presented trees.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "arbor/analyzer.hpp"
#include "arbor/decomposition.hpp"
#include "arbor/presentation.hpp"
#include "arbor/report.hpp"
#include "arbor/siblings.hpp"
#include "arbor/unfold.hpp"

namespace {

using namespace arbor;

enum Exit { ok = 0, usage = 1, parse = 2, validation = 3, not_applicable = 4, generator = 5 };

struct RunConfig {
  std::vector<std::string> inputs;
  std::string format = "text";
  std::size_t depth = 4;
  std::uint64_t width = 3;
  Budget budget;
  std::size_t family_depth = 12;
  std::string family = "leafless";
  std::size_t count = 4;
  std::string out;
  std::string root_image;
  std::string attach;
};

/// Fills cfg from the JSON file named by ARBOR_RANK_CONFIG, if set. Flags
/// parsed afterwards override these values.
void load_env_config(RunConfig& cfg) {
  const char* path = std::getenv("ARBOR_RANK_CONFIG");
  if (!path || !*path) return;
  std::ifstream in(path);
  if (!in) throw std::runtime_error(std::string("cannot open config ") + path);
  const auto j = nlohmann::json::parse(in);
  auto get = [&](const char* key, auto& field) {
    if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
  };
  get("format", cfg.format);
  get("depth", cfg.depth);
  get("width", cfg.width);
  get("witness_depth", cfg.budget.witness_depth);
  get("max_vertices", cfg.budget.max_vertices);
  get("root_images", cfg.budget.max_root_images);
  get("family_size", cfg.budget.family_size);
  get("family_depth", cfg.family_depth);
  get("count", cfg.count);
}

void emit(const RunConfig& cfg, const std::vector<std::pair<std::string, Json>>& json,
          const std::vector<std::pair<std::string, std::string>>& text) {
  if (cfg.format == "json") {
    if (json.size() == 1) {
      std::cout << json.front().second.dump(2) << "\n";
    } else {
      Json all = Json::array();
      for (const auto& [file, j] : json) all.push_back(Json{{"file", file}, {"report", j}});
      std::cout << all.dump(2) << "\n";
    }
    return;
  }
  for (const auto& [file, t] : text) {
    if (text.size() > 1) std::cout << "== " << file << " ==\n";
    std::cout << t;
  }
}

template <typename F>
void for_each_input(const RunConfig& cfg, F&& f) {
  std::vector<std::pair<std::string, Json>> json;
  std::vector<std::pair<std::string, std::string>> text;
  for (const auto& file : cfg.inputs) {
    const TreePresentation p = read_presentation_file(file);
    if (cfg.format == "json") {
      json.emplace_back(file, f(p, true).first);
    } else {
      text.emplace_back(file, f(p, false).second);
    }
  }
  emit(cfg, json, text);
}

void require_format(const RunConfig& cfg, std::initializer_list<const char*> allowed) {
  for (const char* a : allowed) {
    if (cfg.format == a) return;
  }
  throw CLI::ValidationError("--format", "format '" + cfg.format + "' is not available for this command");
}

FamilyOptions family_options(const RunConfig& cfg) {
  return {cfg.family_depth, cfg.width, std::max<std::size_t>(cfg.budget.max_vertices, 1000000)};
}

/// The supplied root image, or the first one the bounded search likes, or
/// the identity at the root (which the generators then reject).
SelfEmbedding self_witness(const TreePresentation& p, const RunConfig& cfg) {
  if (!cfg.root_image.empty()) {
    auto f = self_embedding_at(p, parse_address(cfg.root_image));
    if (!f) throw CLI::ValidationError("--root-image", "no self-embedding with that root image");
    return *f;
  }
  if (end_category(p) == EndCategory::many_ends) {
    Budget b = cfg.budget;
    b.witness_depth = cfg.family_depth;
    b.width = cfg.width;
    b.family_size = std::max(cfg.count, b.family_size);
    if (auto found = search_self_embedding(p, b).witness) return *found;
  }
  return *self_embedding_at(p, {});
}

SiblingFamily make_family(const RunConfig& cfg) {
  const FamilyOptions fo = family_options(cfg);
  if (cfg.family == "star") {
    if (cfg.inputs.empty()) return star_family(cfg.count, fo);
    const TreePresentation p = read_presentation_file(cfg.inputs.front());
    auto site = find_state_augment_site(p);
    if (!site || end_category(p) != EndCategory::zero_ends) {
      throw GeneratorError(GeneratorError::Kind::evidence_missing, "no ω slot with a proper truncation to add");
    }
    return augment_family(p, *site, cfg.count, fo);
  }
  if (cfg.inputs.empty()) throw CLI::RequiredError("FILE");
  const TreePresentation p = read_presentation_file(cfg.inputs.front());
  if (cfg.family == "leafless") {
    if (!(rank_of_presentation(p) == RankValue::finite(0))) {
      throw GeneratorError(GeneratorError::Kind::not_leafless, "rank is " + rank_of_presentation(p).to_string());
    }
    return leafless_family(p, self_witness(p, cfg), cfg.count, fo);
  }
  if (cfg.family == "path-attach") {
    if (rank_of_presentation(p).is_omega()) throw GeneratorError(GeneratorError::Kind::infinite_rank, "rank is Omega");
    std::optional<Address> x;
    if (!cfg.attach.empty()) x = parse_address(cfg.attach);
    return path_attach_family(p, self_witness(p, cfg), cfg.count, fo, x);
  }
  // branch-swap
  if (end_category(p) == EndCategory::zero_ends) {
    auto site = find_state_augment_site(p);
    if (!site) throw GeneratorError(GeneratorError::Kind::evidence_missing, "no condition-1 pattern found");
    return augment_family(p, *site, cfg.count, fo);
  }
  if (end_category(p) == EndCategory::one_end) {
    throw GeneratorError(GeneratorError::Kind::not_applicable, "leaf representation not applicable");
  }
  auto ev = check_condition1(p, cfg.count);
  if (!ev) throw GeneratorError(GeneratorError::Kind::evidence_missing, "no condition-1 pattern found");
  return branch_swap_family(p, ev->branch, ev->sibling_shapes, fo);
}

void add_budget_flags(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--witness-depth", cfg.budget.witness_depth, "Depth of witness searches");
  cmd->add_option("--max-vertices", cfg.budget.max_vertices, "Unfolded vertex cap per search");
  cmd->add_option("--root-images", cfg.budget.max_root_images, "Candidate root images for self-embeddings");
  cmd->add_option("--family-size", cfg.budget.family_size, "Members generated for an Infinite verdict");
}

int run(int argc, char** argv) {
  RunConfig cfg;
  try {
    load_env_config(cfg);
  } catch (const std::exception& e) {
    std::cerr << "arbor-rank: config: " << e.what() << "\n";
    return usage;
  }

  CLI::App app{"Rank, leaf representation and sibling analysis of finitely presented trees"};
  app.require_subcommand(1);

  auto* rank = app.add_subcommand("rank", "Pruning rank, end category and core classes");
  rank->add_option("files", cfg.inputs, "Presentation files")->required()->check(CLI::ExistingFile);

  auto* decompose = app.add_subcommand("decompose", "Leaf representation of a many-ended tree");
  decompose->add_option("files", cfg.inputs, "Presentation files")->required()->check(CLI::ExistingFile);

  auto* siblings = app.add_subcommand("siblings", "Generate a certified sibling family");
  siblings->add_option("file", cfg.inputs, "Presentation file (optional for --family star)")
      ->check(CLI::ExistingFile)
      ->expected(0, 1);
  siblings->add_option("--family", cfg.family, "leafless, path-attach, branch-swap or star")
      ->check(CLI::IsMember({"leafless", "path-attach", "branch-swap", "star"}));
  siblings->add_option("--count", cfg.count, "Number of members")->check(CLI::PositiveNumber);
  siblings->add_option("--out", cfg.out, "Directory for member files and manifest.json");
  siblings->add_option("--depth", cfg.family_depth, "Witness depth");
  siblings->add_option("--root-image", cfg.root_image, "Root image of the self-embedding, e.g. /0.1");
  siblings->add_option("--attach", cfg.attach, "Attachment vertex for path-attach, e.g. /");
  add_budget_flags(siblings, cfg);

  auto* render = app.add_subcommand("render", "DOT rendering of a truncated unfolding");
  render->add_option("file", cfg.inputs, "Presentation file")->required()->check(CLI::ExistingFile)->expected(1);
  render->add_option("--depth", cfg.depth, "Truncation depth");

  auto* analyze_cmd = app.add_subcommand("analyze", "Sibling-count verdict");
  analyze_cmd->add_option("files", cfg.inputs, "Presentation files")->required()->check(CLI::ExistingFile);
  analyze_cmd->add_option("--out", cfg.out, "Directory for the evidence family, if any");
  add_budget_flags(analyze_cmd, cfg);

  for (auto* sub : app.get_subcommands({})) {
    sub->add_option("--format", cfg.format, "Output format: text, json or dot")
        ->check(CLI::IsMember({"text", "json", "dot"}));
    sub->add_option("--width", cfg.width, "Copies materialised for an ω slot")->check(CLI::PositiveNumber);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? ok : usage;
  }

  try {
    if (rank->parsed()) {
      require_format(cfg, {"text", "json"});
      for_each_input(cfg, [](const TreePresentation& p, bool) { return std::pair{rank_json(p), rank_text(p)}; });
    } else if (decompose->parsed()) {
      require_format(cfg, {"text", "json"});
      for_each_input(cfg, [](const TreePresentation& p, bool json) {
        return json ? std::pair{decompose_json(p), std::string()} : std::pair{Json(), decompose_text(p)};
      });
    } else if (siblings->parsed()) {
      require_format(cfg, {"text", "json"});
      const SiblingFamily fam = make_family(cfg);
      if (!cfg.out.empty()) write_family(fam, cfg.out);
      if (cfg.format == "json") {
        std::cout << family_manifest(fam).dump(2) << "\n";
      } else {
        std::cout << family_text(fam);
        if (!cfg.out.empty()) std::cout << "wrote " << fam.members.size() + 2 << " files to " << cfg.out << "\n";
      }
    } else if (render->parsed()) {
      const TreePresentation p = read_presentation_file(cfg.inputs.front());
      const RenderOptions ro{cfg.depth, cfg.width, cfg.budget.max_vertices};
      if (cfg.format == "json") {
        std::cout << render_json(p, ro).dump(2) << "\n";
      } else {
        std::cout << render_dot(p, ro);
      }
    } else if (analyze_cmd->parsed()) {
      require_format(cfg, {"text", "json"});
      cfg.budget.width = cfg.width;
      if (!cfg.out.empty() && cfg.inputs.size() > 1) {
        throw CLI::ValidationError("--out", "--out takes a single input file");
      }
      for_each_input(cfg, [&](const TreePresentation& p, bool) {
        const Verdict v = analyze(p, cfg.budget);
        std::string text = verdict_text(v);
        if (v.family && !cfg.out.empty()) {
          write_family(*v.family, cfg.out);
          text += "evidence written to " + cfg.out + "\n";
        }
        return std::pair{verdict_json(v), text};
      });
    }
  } catch (const CLI::Error& e) {
    std::cerr << "arbor-rank: " << e.what() << "\n";
    return usage;
  } catch (const ParseError& e) {
    std::cerr << "arbor-rank: " << e.what() << "\n";
    return e.is_validation() ? validation : parse;
  } catch (const NoCore& e) {
    std::cerr << "arbor-rank: " << e.what() << "\n";
    return not_applicable;
  } catch (const GeneratorError& e) {
    std::cerr << "arbor-rank: " << e.what() << "\n";
    return generator;
  } catch (const BudgetExceeded& e) {
    std::cerr << "arbor-rank: budget exceeded: " << e.what() << "\n";
    return usage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "arbor-rank: " << e.what() << "\n";
    return validation;
  } catch (const std::exception& e) {
    std::cerr << "arbor-rank: " << e.what() << "\n";
    return usage;
  }
  return ok;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
