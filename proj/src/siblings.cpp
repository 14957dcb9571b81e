#include "arbor/siblings.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <set>

#include "arbor/decomposition.hpp"
#include "arbor/unfold.hpp"

namespace arbor {

GeneratorError::GeneratorError(Kind kind, const std::string& detail)
    : std::runtime_error(std::string(to_string(kind)) + (detail.empty() ? "" : ": " + detail)), kind_(kind) {}

std::string_view to_string(GeneratorError::Kind kind) {
  switch (kind) {
    case GeneratorError::Kind::not_leafless: return "NotLeafless";
    case GeneratorError::Kind::witness_surjective_at_depth: return "WitnessSurjectiveAtDepth";
    case GeneratorError::Kind::infinite_rank: return "InfiniteRank";
    case GeneratorError::Kind::no_complement_ray_evidence: return "NoComplementRayEvidence";
    case GeneratorError::Kind::evidence_missing: return "EvidenceMissing";
    case GeneratorError::Kind::shapes_not_pairwise_distinct: return "ShapesNotPairwiseDistinct";
    case GeneratorError::Kind::not_applicable: return "NotApplicable";
  }
  return "GeneratorError";
}

const std::vector<GalleryEntry>& gallery() {
  static const std::vector<GalleryEntry> entries = [] {
    auto entry = [](std::string name, std::string_view dsl, RankValue rank, EndCategory ends, std::size_t core) {
      return GalleryEntry{std::move(name), parse_dsl(dsl), rank, ends, core};
    };
    std::vector<GalleryEntry> g;
    g.push_back(entry("star", "state r { m:w } state m { l:1 } state l { } root r", RankValue::finite(3),
                      EndCategory::zero_ends, 0));
    g.push_back(entry("binary", "state r { q:2 } state q { q:2 } root r", RankValue::finite(0),
                      EndCategory::many_ends, 2));
    g.push_back(entry("binary_sibling", "state r { s:1 q:1 } state s { q:1 } state q { q:2 } root r",
                      RankValue::finite(0), EndCategory::many_ends, 3));
    g.push_back(entry("ray", "state a { a:1 } root a", RankValue::omega(), EndCategory::one_end, 0));
    g.push_back(entry("double_ray", "state m { a:1 b:1 } state a { a:1 } state b { b:1 } root m",
                      RankValue::finite(0), EndCategory::many_ends, 3));
    g.push_back(entry("comb", "state c { c:1 t:1 } state t { } root c", RankValue::omega(),
                      EndCategory::one_end, 0));
    return g;
  }();
  return entries;
}

const TreePresentation& gallery_presentation(std::string_view name) {
  for (const auto& e : gallery()) {
    if (e.name == name) return e.presentation;
  }
  throw std::out_of_range("no gallery entry '" + std::string(name) + "'");
}

namespace {

bool is_prefix(const Address& prefix, const Address& a) {
  return prefix.size() <= a.size() && std::equal(prefix.begin(), prefix.end(), a.begin());
}

bool is_parent_of(const Address& parent, const Address& child) {
  return child.size() == parent.size() + 1 && is_prefix(parent, child);
}

Address parent_of(Address a) {
  a.pop_back();
  return a;
}

/// First ray-carrying slot of a state, copy 0.
std::optional<Step> ray_step(const TreePresentation& p, const std::vector<bool>& rays, std::size_t s) {
  const auto& slots = p.state(s).slots;
  for (std::size_t k = 0; k < slots.size(); ++k) {
    if (rays[slots[k].state]) return Step{static_cast<std::uint32_t>(k), 0};
  }
  return std::nullopt;
}

}  // namespace

std::size_t PendantPath::chain_index(const Address& a) const {
  if (a.size() <= attachment.size() || !is_prefix(attachment, a)) return 0;
  if (a[attachment.size()].slot != chain_slot) return 0;
  return a.size() - attachment.size();
}

bool PendantPath::on_spine(const Address& a) const { return is_prefix(a, attachment) || chain_index(a) > 0; }

PendantPath attach_pendant_path(const TreePresentation& p, const Address& x, std::size_t n) {
  if (!valid_address(p, x)) throw std::out_of_range("invalid attachment " + to_string(x));
  if (n == 0) throw std::invalid_argument("pendant path needs at least one vertex");
  std::vector<State> states = p.states();
  std::vector<std::size_t> path{p.root()};
  for (const auto& step : x) path.push_back(p.state(path.back()).slots[step.slot].state);
  const std::size_t len = x.size();

  // The vertices on the way to x get private copies of their states.
  std::vector<std::size_t> dup(len + 1);
  for (std::size_t i = 0; i <= len; ++i) {
    dup[i] = states.size();
    states.push_back({fresh_name(states, p.name(path[i]) + "_d"), p.state(path[i]).slots});
  }
  std::vector<std::uint32_t> dup_slot(len);
  std::vector<bool> split(len, false);
  for (std::size_t i = 0; i < len; ++i) {
    auto& slots = states[dup[i]].slots;
    const std::uint32_t k = x[i].slot;
    const Multiplicity m = slots[k].multiplicity;
    if (m == Multiplicity::finite(1)) {
      slots[k].state = dup[i + 1];
      dup_slot[i] = k;
    } else {
      if (m.is_finite()) slots[k].multiplicity = Multiplicity::finite(m.value() - 1);
      slots.push_back({dup[i + 1], Multiplicity::finite(1)});
      dup_slot[i] = static_cast<std::uint32_t>(slots.size() - 1);
      split[i] = true;
    }
  }
  const auto chain_slot = static_cast<std::uint32_t>(states[dup[len]].slots.size());
  const std::size_t first = states.size();
  for (std::size_t j = 1; j <= n; ++j) states.push_back({fresh_name(states, "pend" + std::to_string(j)), {}});
  for (std::size_t j = 0; j + 1 < n; ++j) states[first + j].slots.push_back({first + j + 1, Multiplicity::finite(1)});
  states[dup[len]].slots.push_back({first, Multiplicity::finite(1)});

  PendantPath out{drop_unreachable(TreePresentation(std::move(states), dup[0])), {}, chain_slot, n, {}, {}};
  out.from_base = [x, dup_slot, split](const Address& a) {
    Address r;
    bool on_path = true;
    for (std::size_t i = 0; i < a.size(); ++i) {
      Step s = a[i];
      if (on_path && i < x.size()) {
        if (s == x[i]) {
          r.push_back({dup_slot[i], 0});
          continue;
        }
        on_path = false;
        if (split[i] && s.slot == x[i].slot && s.copy > x[i].copy) --s.copy;
      } else {
        on_path = false;
      }
      r.push_back(s);
    }
    return r;
  };
  out.attachment = out.from_base(x);
  out.to_base = [x, dup_slot, split, chain_slot](const Address& a) -> std::optional<Address> {
    Address r;
    bool on_path = true;
    for (std::size_t i = 0; i < a.size(); ++i) {
      Step s = a[i];
      if (on_path && i < x.size()) {
        if (s.slot == dup_slot[i] && (split[i] || s.copy == x[i].copy)) {
          r.push_back(x[i]);
          continue;
        }
        on_path = false;
        if (split[i] && s.slot == x[i].slot && s.copy >= x[i].copy) ++s.copy;
      } else if (on_path && i == x.size()) {
        if (s.slot == chain_slot) return std::nullopt;
        on_path = false;
      }
      r.push_back(s);
    }
    return r;
  };
  return out;
}

Reroot reroot(const TreePresentation& p, const Address& a) {
  if (!valid_address(p, a)) throw std::out_of_range("invalid address " + to_string(a));
  if (a.empty()) return {p, [](const Address& b) { return b; }};
  std::vector<State> states = p.states();
  std::vector<std::size_t> path{p.root()};
  for (const auto& step : a) path.push_back(p.state(path.back()).slots[step.slot].state);
  const std::size_t len = a.size();
  // Up state i is the vertex at depth i seen from its child on the path;
  // slot_map[i][j] is the original slot behind its slot j, and the link
  // further up (for i > 0) comes last.
  std::vector<std::vector<std::uint32_t>> slot_map(len);
  std::size_t below = 0;
  for (std::size_t i = 0; i < len; ++i) {
    State st{fresh_name(states, p.name(path[i]) + "_up"), {}};
    const auto& slots = p.state(path[i]).slots;
    for (std::size_t k = 0; k < slots.size(); ++k) {
      Multiplicity m = slots[k].multiplicity;
      if (k == a[i].slot && m.is_finite()) m = Multiplicity::finite(m.value() - 1);
      if (m.is_zero()) continue;
      st.slots.push_back({slots[k].state, m});
      slot_map[i].push_back(static_cast<std::uint32_t>(k));
    }
    if (i > 0) st.slots.push_back({below, Multiplicity::finite(1)});
    below = states.size();
    states.push_back(std::move(st));
  }
  State top{fresh_name(states, p.name(path.back()) + "_top"), p.state(path.back()).slots};
  const auto top_link = static_cast<std::uint32_t>(top.slots.size());
  top.slots.push_back({below, Multiplicity::finite(1)});
  states.push_back(std::move(top));
  const std::size_t root = states.size() - 1;
  Reroot r{drop_unreachable(TreePresentation(std::move(states), root)), {}};
  r.to_original = [a, slot_map, top_link](const Address& b) {
    Address out = a;
    std::size_t level = a.size();
    bool chain = true;
    for (const auto& step : b) {
      if (!chain) {
        out.push_back(step);
        continue;
      }
      const bool up = level == a.size() ? step.slot == top_link : level > 0 && step.slot == slot_map[level].size();
      if (up) {
        --level;
        out.pop_back();
        continue;
      }
      chain = false;
      if (level == a.size()) {
        out.push_back(step);
        continue;
      }
      const std::uint32_t k = slot_map[level].at(step.slot);
      std::uint64_t c = step.copy;
      if (k == a[level].slot && c >= a[level].copy) ++c;
      out.push_back({k, c});
    }
    return out;
  };
  return r;
}

TreePresentation reroot_at(const TreePresentation& p, const Address& a) { return reroot(p, a).tree; }

SelfEmbedding::SelfEmbedding(const TreePresentation& p, WitnessRule f)
    : root_image(f.image({})), target(p), rule(std::move(f)), to_original([](const Address& b) { return b; }) {}

SelfEmbedding::SelfEmbedding(Address root, Reroot r, std::shared_ptr<const Simulation> sim)
    : root_image(std::move(root)),
      target(std::move(r.tree)),
      rule(*downward_rule(sim, {})),
      to_original(std::move(r.to_original)),
      simulation(std::move(sim)) {}

std::optional<SelfEmbedding> self_embedding_at(const TreePresentation& p, const Address& root_image) {
  Reroot r = reroot(p, root_image);
  auto sim = std::make_shared<const Simulation>(p, r.tree, true);
  if (!sim->contains(root_class(p), root_class(r.tree))) return std::nullopt;
  return SelfEmbedding(root_image, std::move(r), std::move(sim));
}

std::optional<UncoveredRay> find_uncovered_ray(const TreePresentation& p, const SelfEmbedding& f,
                                               std::size_t length, const FamilyOptions& options,
                                               std::optional<Address> only_x) {
  if (length == 0) throw std::invalid_argument("ray length must be positive");
  UnfoldOptions uo;
  uo.depth = options.depth;
  uo.omega_width = options.width;
  uo.max_vertices = options.max_vertices;
  const Unfolding u = unfold(p, uo);
  // Everything below is in the coordinates of f.target.
  const TreePresentation& q = f.target;
  const auto rays = ray_states(q);
  std::vector<Address> addr(u.size()), image(u.size());
  for (Vertex v = 0; v < u.size(); ++v) {
    if (auto parent = u.at(v).parent) {
      addr[v] = addr[*parent];
      addr[v].push_back(u.at(v).step);
    }
    image[v] = f.rule.image(addr[v]);
    if (!valid_address(q, image[v])) return std::nullopt;
    if (auto parent = u.at(v).parent; parent && !is_parent_of(image[*parent], image[v])) return std::nullopt;
  }

  auto descend = [&](std::vector<Address> ray) -> std::optional<std::vector<Address>> {
    while (ray.size() < length) {
      auto step = ray_step(q, rays, state_at(q, ray.back()));
      if (!step) return std::nullopt;
      Address next = ray.back();
      next.push_back(*step);
      ray.push_back(std::move(next));
    }
    for (auto& t : ray) t = f.to_original(t);
    return ray;
  };

  for (Vertex v = 0; v < u.size(); ++v) {
    const Address& x = addr[v];
    if (only_x && x != *only_x) continue;
    const Address& y = image[v];
    // Above a downward image of the root: walk up, then off to the side.
    if (x.empty() && !y.empty() && class_at(q, rays, y).up_ray) {
      std::vector<Address> ray;
      Address came = y;
      Address cur = parent_of(y);
      bool up = true;
      ray.push_back(cur);
      while (up && ray.size() < length) {
        const auto& slots = q.state(state_at(q, cur)).slots;
        const Step from = came.back();
        std::optional<Step> side;
        for (std::size_t k = 0; k < slots.size() && !side; ++k) {
          if (!rays[slots[k].state]) continue;
          if (k != from.slot) {
            side = Step{static_cast<std::uint32_t>(k), 0};
          } else if (slots[k].multiplicity != Multiplicity::finite(1)) {
            side = Step{from.slot, from.copy == 0 ? 1u : 0u};
          }
        }
        if (side) {
          cur.push_back(*side);
          up = false;
        } else {
          if (cur.empty()) {
            ray.clear();
            break;
          }
          came = cur;
          cur.pop_back();
        }
        ray.push_back(cur);
      }
      if (!ray.empty()) {
        if (auto full = descend(ray)) return UncoveredRay{x, *full};
      }
    }
    // Beside the images of x's children.
    if (x.size() >= options.depth) continue;
    const auto& tslots = q.state(state_at(q, y)).slots;
    std::vector<Step> free;
    if (f.simulation) {
      std::map<std::uint32_t, std::set<std::uint64_t>> used;
      std::set<std::uint32_t> absorbing;
      for (const auto& pieces : f.simulation->assignment(u.at(v).cls, class_at(q, rays, y))) {
        for (const auto& piece : pieces) {
          if (tslots[piece.target_slot].multiplicity.is_omega()) {
            absorbing.insert(piece.target_slot);
          } else {
            for (std::uint64_t c = 0; c < piece.count.value(); ++c) {
              used[piece.target_slot].insert(piece.base + c * piece.stride);
            }
          }
        }
      }
      for (std::size_t j = 0; j < tslots.size(); ++j) {
        if (!rays[tslots[j].state]) continue;
        const auto slot = static_cast<std::uint32_t>(j);
        if (tslots[j].multiplicity.is_omega()) {
          if (!absorbing.count(slot)) free.push_back({slot, 0});
          continue;
        }
        for (std::uint64_t c = 0; c < tslots[j].multiplicity.value(); ++c) {
          if (!used[slot].count(c)) free.push_back({slot, c});
        }
      }
    } else {
      // An opaque map: only a vertex with finitely many children can be
      // checked by listing their images.
      const auto& slots = p.state(u.at(v).state).slots;
      if (std::any_of(slots.begin(), slots.end(), [](const Slot& c) { return c.multiplicity.is_omega(); })) continue;
      std::set<Address> images;
      for (Vertex c : u.at(v).children) images.insert(image[c]);
      for (std::size_t j = 0; j < tslots.size(); ++j) {
        if (!rays[tslots[j].state]) continue;
        const std::uint64_t copies = tslots[j].multiplicity.materialized(images.size() + 1);
        for (std::uint64_t c = 0; c < copies; ++c) {
          Address t1 = y;
          t1.push_back({static_cast<std::uint32_t>(j), c});
          if (!images.count(t1)) free.push_back(t1.back());
        }
      }
    }
    for (const Step& step : free) {
      Address t1 = y;
      t1.push_back(step);
      if (auto full = descend({t1})) return UncoveredRay{x, *full};
    }
  }
  return std::nullopt;
}

namespace {

struct Built {
  TreePresentation tree;
  EquimorphyEvidence evidence;
};

Built path_member(const TreePresentation& p, const SelfEmbedding& f, const UncoveredRay& ur, std::size_t n,
                  const FamilyOptions& options, const std::string& note) {
  auto pp = std::make_shared<const PendantPath>(attach_pendant_path(p, ur.x, n));
  // Past the path to f's root image every frontier vertex maps downward.
  const std::size_t depth = std::max({options.depth, ur.x.size() + n + 2, f.root_image.size() + 2});
  WitnessRule into_base;
  auto ray = ur.ray;
  into_base.image = [pp, f, ray](const Address& a) {
    if (std::size_t j = pp->chain_index(a)) return ray.at(j - 1);
    return f.image(*pp->to_base(a));
  };
  into_base.pinned = [pp](const Address& a) { return pp->on_spine(a); };
  WitnessRule from_base;
  from_base.image = [pp](const Address& a) { return pp->from_base(a); };
  Built b{pp->tree, {note, {}, {}}};
  b.evidence.member_to_base = materialize(into_base, pp->tree, p, depth, options.width, options.max_vertices);
  b.evidence.base_to_member = materialize(from_base, p, pp->tree, depth, options.width, options.max_vertices);
  return b;
}

SiblingFamily path_family(const std::string& construction, const TreePresentation& p, const SelfEmbedding& f,
                          const UncoveredRay& ur, std::size_t n_max, const FamilyOptions& options,
                          const std::string& note, std::uint64_t certified_above) {
  SiblingFamily fam{construction, p, {}, {}, {}, {}};
  std::vector<std::uint64_t> mld;
  for (std::size_t n = 1; n <= n_max; ++n) {
    Built b = path_member(p, f, ur, n, options, note);
    fam.labels.push_back("T_" + std::to_string(n));
    mld.push_back(max_leaf_distance_of(b.tree).value_or(0));
    fam.members.push_back(std::move(b.tree));
    fam.evidence.push_back(std::move(b.evidence));
  }
  for (std::size_t i = 0; i < n_max; ++i) {
    for (std::size_t j = i + 1; j < n_max; ++j) {
      PairCertificate pc{i, j, std::nullopt};
      if (std::min(i, j) + 1 > certified_above && mld[i] != mld[j]) {
        pc.certificate = MaxLeafDistanceMismatch{mld[i], mld[j]};
      }
      fam.pairs.push_back(std::move(pc));
    }
  }
  return fam;
}

}  // namespace

SiblingFamily leafless_family(const TreePresentation& p, const SelfEmbedding& f, std::size_t n_max,
                              const FamilyOptions& options) {
  if (!(rank_of_presentation(p) == RankValue::finite(0))) {
    throw GeneratorError(GeneratorError::Kind::not_leafless, "rank is " + rank_of_presentation(p).to_string());
  }
  auto ur = find_uncovered_ray(p, f, std::max<std::size_t>(n_max, 1), options);
  if (!ur) {
    throw GeneratorError(GeneratorError::Kind::witness_surjective_at_depth,
                         "no uncovered ray beside a downward image within depth " + std::to_string(options.depth));
  }
  return path_family("leafless", p, f, *ur, n_max, options,
                     "T -> S = f(T) -> T_n -> T; path attached at " + to_string(ur->x) + " beside " +
                         to_string(ur->ray.front()),
                     0);
}

SiblingFamily path_attach_family(const TreePresentation& p, const SelfEmbedding& f, std::size_t n_max,
                                 const FamilyOptions& options, std::optional<Address> x) {
  const RankValue rank = rank_of_presentation(p);
  if (rank.is_omega()) throw GeneratorError(GeneratorError::Kind::infinite_rank, "rank is Omega");
  auto ur = find_uncovered_ray(p, f, std::max<std::size_t>(n_max, 1), options, x);
  if (!ur) {
    throw GeneratorError(GeneratorError::Kind::no_complement_ray_evidence,
                         "no ray outside the image of a downward witness within depth " +
                             std::to_string(options.depth));
  }
  return path_family("path-attach", p, f, *ur, n_max, options,
                     "T -> f(T) -> T_n -> T; path attached at " + to_string(ur->x) + ", complement ray from " +
                         to_string(ur->ray.front()),
                     rank.value());
}

Shape branch_of_state(const TreePresentation& p, std::size_t state) {
  const auto rays = ray_states(p);
  Shape shape;
  std::vector<Shape::Child> kids;
  for (const auto& slot : p.state(state).slots) {
    if (rays[slot.state]) continue;
    const Shape sub = shape_of_state(p, slot.state);
    kids.push_back({shape.import(sub, sub.root()), slot.multiplicity});
  }
  shape.set_root(shape.add(std::move(kids)));
  return shape;
}

bool rooted_equimorphic(const Shape& a, const Shape& b) {
  const auto pa = to_presentation(a), pb = to_presentation(b);
  return Simulation(pa, pb, false).contains(root_class(pa), root_class(pb)) &&
         Simulation(pb, pa, false).contains(root_class(pb), root_class(pa));
}

SiblingFamily branch_swap_family(const TreePresentation& p, const Shape& b,
                                 const std::vector<Shape>& sibling_shapes, const FamilyOptions& options) {
  if (end_category(p) != EndCategory::many_ends) {
    throw GeneratorError(GeneratorError::Kind::not_applicable, "leaf representation not applicable");
  }
  std::set<std::string> forms;
  for (const auto& s : sibling_shapes) {
    if (!forms.insert(s.canonical_form()).second) {
      throw GeneratorError(GeneratorError::Kind::shapes_not_pairwise_distinct, s.canonical_form());
    }
    if (!rooted_equimorphic(s, b)) {
      throw GeneratorError(GeneratorError::Kind::evidence_missing,
                           s.canonical_form() + " is not rooted-equimorphic to " + b.canonical_form());
    }
  }
  const TreePresentation base = reroot_at(p, core_top(p));
  const auto rays = ray_states(base);
  const auto reach = reachable_states(base);
  std::vector<std::size_t> marked;
  for (std::size_t s = 0; s < base.state_count(); ++s) {
    if (!reach[s] || !rays[s]) continue;
    const Shape br = branch_of_state(base, s);
    if (!br.trivial() && rooted_equimorphic(br, b)) marked.push_back(s);
  }
  if (marked.empty()) {
    throw GeneratorError(GeneratorError::Kind::evidence_missing, "no branch equimorphic to " + b.canonical_form());
  }

  SiblingFamily fam{"branch-swap", base, {}, {}, {}, {}};
  std::vector<std::map<std::string, Multiplicity>> profiles;
  for (std::size_t i = 0; i < sibling_shapes.size(); ++i) {
    const Shape& s = sibling_shapes[i];
    std::vector<State> states = base.states();
    std::vector<std::size_t> node_state(s.size());
    for (std::size_t nd = 0; nd < s.size(); ++nd) {
      node_state[nd] = states.size();
      states.push_back({fresh_name(states, "g" + std::to_string(nd)), {}});
    }
    for (std::size_t nd = 0; nd < s.size(); ++nd) {
      for (const auto& c : s.children(nd)) states[node_state[nd]].slots.push_back({node_state[c.node], c.multiplicity});
    }
    for (std::size_t x : marked) {
      std::vector<Slot> slots;
      for (const auto& slot : states[x].slots) {
        if (rays[slot.state]) slots.push_back(slot);
      }
      for (const auto& c : s.children(s.root())) slots.push_back({node_state[c.node], c.multiplicity});
      states[x].slots = std::move(slots);
    }
    TreePresentation member = drop_unreachable(TreePresentation(std::move(states), base.root()));
    auto into = find_rooted_witness(member, base, {}, options.depth, options.width);
    auto from = find_rooted_witness(base, member, {}, options.depth, options.width);
    if (!into || !from) {
      throw GeneratorError(GeneratorError::Kind::evidence_missing,
                           "no rooted witness between the base and member " + std::to_string(i));
    }
    fam.labels.push_back("S_" + std::to_string(i));
    profiles.push_back(*branch_profile_of(member));
    fam.members.push_back(std::move(member));
    fam.evidence.push_back({"branches equimorphic to " + b.canonical_form() + " replaced by " + s.canonical_form(),
                            std::move(*into), std::move(*from)});
  }
  auto count = [](const std::map<std::string, Multiplicity>& m, const std::string& k) {
    auto it = m.find(k);
    return it == m.end() ? Multiplicity{} : it->second;
  };
  for (std::size_t i = 0; i < sibling_shapes.size(); ++i) {
    for (std::size_t j = i + 1; j < sibling_shapes.size(); ++j) {
      const std::string& k = sibling_shapes[i].canonical_form();
      PairCertificate pc{i, j, std::nullopt};
      if (count(profiles[i], k) != count(profiles[j], k)) {
        pc.certificate = BranchProfileMismatch{k, count(profiles[i], k), count(profiles[j], k)};
      }
      fam.pairs.push_back(std::move(pc));
    }
  }
  return fam;
}

namespace {

Shape subshape(const Shape& s, std::size_t node) {
  Shape out;
  out.set_root(out.import(s, node));
  return out;
}

std::vector<std::size_t> reachable_nodes(const Shape& s) {
  std::vector<std::size_t> order{s.root()};
  std::set<std::size_t> seen{s.root()};
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (const auto& c : s.children(order[i])) {
      if (seen.insert(c.node).second) order.push_back(c.node);
    }
  }
  return order;
}

}  // namespace

std::optional<AugmentSite> find_augment_site(const Shape& s) {
  for (std::size_t v : reachable_nodes(s)) {
    for (const auto& c : s.children(v)) {
      if (!c.multiplicity.is_omega() || s.height(c.node) == 0) continue;
      const Shape whole = subshape(s, c.node);
      for (std::uint64_t h = 0; h < whole.height(); ++h) {
        Shape extra = truncate(whole, h);
        const bool finite = std::all_of(s.children(v).begin(), s.children(v).end(), [&](const Shape::Child& d) {
          return s.code(d.node) != extra.canonical_form() || d.multiplicity.is_finite();
        });
        if (finite) return AugmentSite{v, std::move(extra)};
      }
    }
  }
  return std::nullopt;
}

Shape augment(const Shape& s, std::size_t node, const Shape& extra, std::uint64_t k) {
  Shape out;
  const std::size_t added = out.import(extra, extra.root());
  std::map<std::size_t, std::size_t> memo;
  std::function<std::size_t(std::size_t)> copy = [&](std::size_t n) -> std::size_t {
    if (auto it = memo.find(n); it != memo.end()) return it->second;
    std::vector<Shape::Child> kids;
    for (const auto& c : s.children(n)) kids.push_back({copy(c.node), c.multiplicity});
    if (n == node && k > 0) kids.push_back({added, Multiplicity::finite(k)});
    return memo[n] = out.add(std::move(kids));
  };
  out.set_root(copy(s.root()));
  return out;
}

std::optional<StateAugmentSite> find_state_augment_site(const TreePresentation& p) {
  const auto rays = ray_states(p);
  const auto reach = reachable_states(p);
  for (std::size_t v = 0; v < p.state_count(); ++v) {
    if (!reach[v] || rays[v]) continue;
    const auto& slots = p.state(v).slots;
    for (const auto& slot : slots) {
      if (!slot.multiplicity.is_omega()) continue;
      const Shape whole = shape_of_state(p, slot.state);
      for (std::uint64_t h = 0; h < whole.height(); ++h) {
        Shape extra = truncate(whole, h);
        const bool finite = std::all_of(slots.begin(), slots.end(), [&](const Slot& d) {
          return d.multiplicity.is_finite() || shape_of_state(p, d.state).canonical_form() != extra.canonical_form();
        });
        if (finite) return StateAugmentSite{v, std::move(extra)};
      }
    }
  }
  return std::nullopt;
}

SiblingFamily augment_family(const TreePresentation& p, const StateAugmentSite& site, std::size_t n_max,
                             const FamilyOptions& options) {
  if (end_category(p) != EndCategory::zero_ends) {
    throw GeneratorError(GeneratorError::Kind::not_applicable, "augment family needs a rayless tree");
  }
  SiblingFamily fam{"augment", p, {}, {}, {}, {}};
  std::vector<std::string> forms;
  for (std::uint64_t k = 0; k < n_max; ++k) {
    std::vector<State> states = p.states();
    if (k > 0) {
      // Reuse a state that already presents the extra shape.
      std::optional<std::size_t> extra_state;
      for (std::size_t s = 0; s < p.state_count() && !extra_state; ++s) {
        if (!ray_states(p)[s] && shape_of_state(p, s).canonical_form() == site.extra.canonical_form()) extra_state = s;
      }
      if (!extra_state) {
        const Shape& e = site.extra;
        std::vector<std::size_t> node_state(e.size());
        for (std::size_t nd = 0; nd < e.size(); ++nd) {
          node_state[nd] = states.size();
          states.push_back({fresh_name(states, "e" + std::to_string(nd)), {}});
        }
        for (std::size_t nd = 0; nd < e.size(); ++nd) {
          for (const auto& c : e.children(nd)) states[node_state[nd]].slots.push_back({node_state[c.node], c.multiplicity});
        }
        extra_state = node_state[e.root()];
      }
      auto& slots = states[site.state].slots;
      slots.insert(slots.begin(), Slot{*extra_state, Multiplicity::finite(k)});
    }
    TreePresentation member = drop_unreachable(TreePresentation(std::move(states), p.root()));
    auto into = find_rooted_witness(member, p, {}, options.depth, options.width);
    auto from = find_rooted_witness(p, member, {}, options.depth, options.width);
    if (!into || !from) {
      throw GeneratorError(GeneratorError::Kind::evidence_missing, "no rooted witness for member " + std::to_string(k));
    }
    fam.labels.push_back("S_" + std::to_string(k));
    forms.push_back(center_rooted_form(member));
    fam.members.push_back(std::move(member));
    fam.evidence.push_back({std::to_string(k) + " extra copies of " + site.extra.canonical_form() +
                                " at state " + p.name(site.state) + ", mapped into spare ω copies",
                            std::move(*into), std::move(*from)});
  }
  for (std::size_t i = 0; i < n_max; ++i) {
    for (std::size_t j = i + 1; j < n_max; ++j) {
      PairCertificate pc{i, j, std::nullopt};
      if (forms[i] != forms[j]) pc.certificate = BranchProfileMismatch{forms[i], Multiplicity::finite(1), Multiplicity{}};
      fam.pairs.push_back(std::move(pc));
    }
  }
  return fam;
}

SiblingFamily star_family(std::size_t n_max, const FamilyOptions& options) {
  if (n_max == 0) throw std::invalid_argument("star family needs at least one member");
  const TreePresentation& star = gallery_presentation("star");
  return augment_family(star, StateAugmentSite{star.root(), Shape()}, n_max, options);
}

WitnessCheck validate_family(const SiblingFamily& family) {
  if (family.members.size() != family.evidence.size()) return {false, "evidence count differs from member count"};
  std::set<std::string> seen;
  for (const auto& m : family.members) {
    if (!seen.insert(serialize(m)).second) return {false, "duplicate member presentation"};
  }
  for (std::size_t i = 0; i < family.members.size(); ++i) {
    const auto& m = family.members[i];
    const auto& e = family.evidence[i];
    const std::string label = i < family.labels.size() ? family.labels[i] : std::to_string(i);
    auto into = verify_witness(e.member_to_base, m, family.base, e.member_to_base.depth);
    if (!into) return {false, label + " -> base: " + into.reason};
    if (!core_respecting(e.member_to_base, m, family.base, e.member_to_base.depth)) {
      return {false, label + " -> base is not core-respecting"};
    }
    auto from = verify_witness(e.base_to_member, family.base, m, e.base_to_member.depth);
    if (!from) return {false, "base -> " + label + ": " + from.reason};
    if (!core_respecting(e.base_to_member, family.base, m, e.base_to_member.depth)) {
      return {false, "base -> " + label + " is not core-respecting"};
    }
  }
  for (const auto& pc : family.pairs) {
    if (!pc.certificate) continue;
    if (pc.first >= family.members.size() || pc.second >= family.members.size()) {
      return {false, "certificate indices out of range"};
    }
    if (!check_certificate(*pc.certificate, family.members[pc.first], family.members[pc.second])) {
      return {false, "certificate " + describe(*pc.certificate) + " does not re-check"};
    }
  }
  return {};
}

}  // namespace arbor
