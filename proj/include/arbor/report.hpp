#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "arbor/analyzer.hpp"
#include "arbor/decomposition.hpp"
#include "arbor/presentation.hpp"
#include "arbor/siblings.hpp"

namespace arbor {

using Json = nlohmann::ordered_json;

/// A count as a JSON number, or the string "omega".
Json to_json(Multiplicity m);
Json to_json(const NonIsoCertificate& c);

Json rank_json(const TreePresentation& p);
std::string rank_text(const TreePresentation& p);

/// Throws NoCore for trees without a leaf representation.
Json decompose_json(const TreePresentation& p);
std::string decompose_text(const TreePresentation& p);

/// Member files are referenced by name; `dir` is only echoed.
Json family_manifest(const SiblingFamily& f);
/// Certificate matrix: '-' on the diagonal, '?' for an uncertified pair,
/// otherwise the first letter of the certificate kind.
std::string family_text(const SiblingFamily& f);

/// Writes base.tree, one <label>.tree per member and manifest.json.
void write_family(const SiblingFamily& f, const std::filesystem::path& dir);

Json verdict_json(const Verdict& v);
std::string verdict_text(const Verdict& v);

struct RenderOptions {
  std::size_t depth = 4;
  std::uint64_t width = 3;
  std::size_t max_vertices = 100000;
};

/// unfold(p, depth) as a DOT digraph; vertices are named state/depth/index
/// and core vertices are filled.
std::string render_dot(const TreePresentation& p, const RenderOptions& options);
Json render_json(const TreePresentation& p, const RenderOptions& options);

}  // namespace arbor
