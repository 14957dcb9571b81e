#include "arbor/decomposition.hpp"

#include <algorithm>

namespace arbor {

Address core_top(const TreePresentation& p) {
  const auto category = end_category(p);
  if (category != EndCategory::many_ends) throw NoCore(category);
  const auto core = classify_core(p);
  const auto& rays = core.ray_states;
  Address a;
  OccurrenceClass c = root_class(p);
  while (!core.is_core(c)) {
    // Non-core with a ray below and none above: exactly one ray slot of
    // multiplicity one.
    const auto& slots = p.state(c.state).slots;
    auto it = std::find_if(slots.begin(), slots.end(), [&](const Slot& s) { return rays[s.state]; });
    auto k = static_cast<std::uint32_t>(it - slots.begin());
    a.push_back({k, 0});
    c = child_class(p, rays, c, k);
  }
  return a;
}

LeafRepresentation leaf_representation(const TreePresentation& p) {
  const Address top = core_top(p);
  const auto core = classify_core(p);
  const auto& rays = core.ray_states;
  ClassGraph g(p);
  const auto counts = occurrence_counts(g);
  const OccurrenceClass top_class = class_at(p, top);

  LeafRepresentation rep{TreePresentation({State{"x", {}}}, 0), {}, top, {}};
  std::map<OccurrenceClass, std::size_t> index;
  for (const auto& c : g.nodes()) {
    if (core.is_core(c)) {
      index.emplace(c, rep.core_classes.size());
      rep.core_classes.push_back(c);
    }
  }
  std::vector<State> states;
  for (const auto& c : rep.core_classes) {
    State st{c.up_ray ? p.name(c.state) : "", {}};
    const auto& slots = p.state(c.state).slots;
    for (std::size_t k = 0; k < slots.size(); ++k) {
      auto it = index.find(child_class(p, rays, c, k));
      if (it != index.end()) st.slots.push_back({it->second, slots[k].multiplicity});
    }
    states.push_back(std::move(st));
  }
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (states[i].name.empty()) {
      states[i].name = fresh_name(states, p.name(rep.core_classes[i].state) + "_top");
    }
  }
  rep.core = TreePresentation(std::move(states), index.at(top_class));

  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto& c = g.node(i);
    if (!core.is_core(c)) continue;
    LeafyBranch b;
    b.attachment = c;
    b.occurrences = counts[i];
    if (c == top_class) {
      ShapeView view;
      view.rayless_only = true;
      b.shape = shape_at(p, top, view);
    } else {
      // Below the top the parent side always carries a ray, so the branch
      // is just the rayless slots.
      std::vector<Shape::Child> kids;
      for (const auto& slot : p.state(c.state).slots) {
        if (rays[slot.state]) continue;
        Shape sub = shape_of_state(p, slot.state);
        kids.push_back({b.shape.import(sub, sub.root()), slot.multiplicity});
      }
      b.shape.set_root(b.shape.add(std::move(kids)));
    }
    if (!b.shape.trivial()) rep.branches.push_back(std::move(b));
  }
  return rep;
}

RankValue branch_rank(const LeafyBranch& b) { return shape_rank(b.shape); }

Multiplicity branch_count(const LeafRepresentation& rep) {
  Multiplicity total;
  for (const auto& b : rep.branches) total += b.occurrences;
  return total;
}

std::uint64_t max_leaf_distance(const LeafRepresentation& rep) {
  std::uint64_t best = 0;
  for (const auto& b : rep.branches) best = std::max(best, b.shape.height());
  return best;
}

std::map<std::string, Multiplicity> branch_profile(const LeafRepresentation& rep) {
  std::map<std::string, Multiplicity> out;
  for (const auto& b : rep.branches) out[b.shape.canonical_form()] += b.occurrences;
  return out;
}

}  // namespace arbor
