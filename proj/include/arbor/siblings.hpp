#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "arbor/certificates.hpp"
#include "arbor/presentation.hpp"
#include "arbor/pruning.hpp"
#include "arbor/shape.hpp"
#include "arbor/witness.hpp"

namespace arbor {

class GeneratorError : public std::runtime_error {
 public:
  enum class Kind {
    not_leafless,
    witness_surjective_at_depth,
    infinite_rank,
    no_complement_ray_evidence,
    evidence_missing,
    shapes_not_pairwise_distinct,
    not_applicable,
  };

  GeneratorError(Kind kind, const std::string& detail);
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

/// "NotLeafless", "WitnessSurjectiveAtDepth", ...
std::string_view to_string(GeneratorError::Kind kind);

struct GalleryEntry {
  std::string name;
  TreePresentation presentation;
  RankValue rank;
  EndCategory ends;
  std::size_t core_classes;
};

/// star, binary, binary_sibling, ray, double_ray, comb, with the values the
/// analyses are expected to produce.
const std::vector<GalleryEntry>& gallery();

/// Throws std::out_of_range for an unknown name.
const TreePresentation& gallery_presentation(std::string_view name);

struct FamilyOptions {
  /// Minimum witness depth; path constructions go deeper when the path
  /// needs it.
  std::size_t depth = 12;
  std::uint64_t width = 3;
  std::size_t max_vertices = 1000000;
};

struct EquimorphyEvidence {
  std::string note;
  TruncatedWitness member_to_base;
  TruncatedWitness base_to_member;
};

struct PairCertificate {
  std::size_t first = 0;
  std::size_t second = 0;
  /// Empty for a pair the construction cannot tell apart.
  std::optional<NonIsoCertificate> certificate;
};

struct SiblingFamily {
  std::string construction;
  TreePresentation base;
  std::vector<std::string> labels;
  std::vector<TreePresentation> members;
  std::vector<EquimorphyEvidence> evidence;
  /// One entry per pair first < second.
  std::vector<PairCertificate> pairs;
};

/// p with a path of n new vertices hanging from the vertex at x. The states
/// on the way from the root to x are duplicated so that only that one
/// vertex changes.
struct PendantPath {
  TreePresentation tree;
  /// Where x sits in the new tree.
  Address attachment;
  std::uint32_t chain_slot = 0;
  std::size_t length = 0;
  /// Address in p of a vertex of the new tree; nullopt on the path.
  std::function<std::optional<Address>(const Address&)> to_base;
  /// Address in the new tree of a vertex of p.
  std::function<Address(const Address&)> from_base;

  /// 1-based position on the new path, 0 elsewhere.
  std::size_t chain_index(const Address& a) const;
  /// On the new path or on the way down to it.
  bool on_spine(const Address& a) const;
};

PendantPath attach_pendant_path(const TreePresentation& p, const Address& x, std::size_t n);

/// The same unrooted tree, rooted at the vertex at `a`, with a map from its
/// addresses back to addresses of p.
struct Reroot {
  TreePresentation tree;
  std::function<Address(const Address&)> to_original;
};

Reroot reroot(const TreePresentation& p, const Address& a);
TreePresentation reroot_at(const TreePresentation& p, const Address& a);

/// A self-embedding of p sending the root to root_image, stored as a
/// downward map into p rerooted there. Seen from p it goes up the path to
/// root_image and back down, so it need not be downward itself.
struct SelfEmbedding {
  Address root_image;
  TreePresentation target;
  WitnessRule rule;
  std::function<Address(const Address&)> to_original;
  /// Set when rule follows this simulation's child assignments, which
  /// tells exactly which target children are used.
  std::shared_ptr<const Simulation> simulation;

  /// A map given directly on p; only downward maps pass the searches.
  SelfEmbedding(const TreePresentation& p, WitnessRule f);
  SelfEmbedding(Address root_image, Reroot r, std::shared_ptr<const Simulation> sim);

  Address image(const Address& a) const { return to_original(rule.image(a)); }
};

/// The canonical core-respecting embedding with the given root image, if
/// the greatest simulation relates the roots.
std::optional<SelfEmbedding> self_embedding_at(const TreePresentation& p, const Address& root_image);

/// A vertex x of p and a ray t1 t2 ... in p that leaves f(x) through a
/// neighbour and never meets the image of f.
struct UncoveredRay {
  Address x;
  std::vector<Address> ray;
};

/// Looks for an uncovered ray of the given length, scanning x in BFS order
/// over unfold(p, depth, width). The map must be downward into f.target:
/// then the image of the subtree at x lies below f(x), which makes the
/// check exact.
std::optional<UncoveredRay> find_uncovered_ray(const TreePresentation& p, const SelfEmbedding& f,
                                               std::size_t length, const FamilyOptions& options,
                                               std::optional<Address> only_x = std::nullopt);

/// Members T_1..T_n_max: p plus a path of n vertices at an attachment
/// vertex whose image under f has an uncovered ray. Throws NotLeafless or
/// WitnessSurjectiveAtDepth.
SiblingFamily leafless_family(const TreePresentation& p, const SelfEmbedding& f, std::size_t n_max,
                              const FamilyOptions& options = {});

/// Same members for a tree of finite rank M; only pairs with both path
/// lengths above M are certified. Throws InfiniteRank or
/// NoComplementRayEvidence.
SiblingFamily path_attach_family(const TreePresentation& p, const SelfEmbedding& f, std::size_t n_max,
                                 const FamilyOptions& options = {},
                                 std::optional<Address> x = std::nullopt);

/// Rooted shape made of the rayless slots of a state.
Shape branch_of_state(const TreePresentation& p, std::size_t state);

/// Rooted embeddings both ways.
bool rooted_equimorphic(const Shape& a, const Shape& b);

/// Member i replaces every leafy branch rooted-equimorphic to b with
/// sibling_shapes[i]. A tree whose root is off the core is first rerooted
/// at its topmost core vertex; that rerooted tree is the family's base.
/// Throws EvidenceMissing or ShapesNotPairwiseDistinct.
SiblingFamily branch_swap_family(const TreePresentation& p, const Shape& b,
                                 const std::vector<Shape>& sibling_shapes, const FamilyOptions& options = {});

/// A node v of a shape with ω copies of a child shape C, and a proper
/// truncation C' of C of which v has finitely many copies: adding k more
/// copies of C' at v gives pairwise distinct rooted siblings.
struct AugmentSite {
  std::size_t node = 0;
  Shape extra;
};

std::optional<AugmentSite> find_augment_site(const Shape& s);

/// `s` with k more copies of `extra` below every occurrence of `node`.
Shape augment(const Shape& s, std::size_t node, const Shape& extra, std::uint64_t k);

/// The same idea on a rayless presentation: a state with an ω slot.
struct StateAugmentSite {
  std::size_t state = 0;
  Shape extra;
};

std::optional<StateAugmentSite> find_state_augment_site(const TreePresentation& p);

/// Members k = 0..n_max-1 add k copies of the site's extra shape to its
/// state. For rayless trees only; certified by center-rooted forms.
SiblingFamily augment_family(const TreePresentation& p, const StateAugmentSite& site, std::size_t n_max,
                             const FamilyOptions& options = {});

/// The augment family of the gallery star: member k has k pendant edges at
/// the centre next to its ω paths of length two.
SiblingFamily star_family(std::size_t n_max, const FamilyOptions& options = {});

/// Re-verifies every witness at its own depth (plus core_respecting) and
/// re-checks every certificate.
WitnessCheck validate_family(const SiblingFamily& family);

}  // namespace arbor
