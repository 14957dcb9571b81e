#include "arbor/unfold.hpp"

#include <algorithm>

namespace arbor {

std::optional<Vertex> Unfolding::find(const Address& a) const {
  Vertex v = tree.root;
  for (const auto& step : a) {
    const auto& kids = vertices[v].children;
    auto it = std::find_if(kids.begin(), kids.end(), [&](Vertex c) {
      return vertices[c].step.slot == step.slot && vertices[c].step.copy == step.copy;
    });
    if (it == kids.end()) return std::nullopt;
    v = *it;
  }
  return v;
}

Address Unfolding::address(Vertex v) const {
  Address a(vertices.at(v).depth);
  for (std::size_t i = a.size(); i > 0; --i) {
    a[i - 1] = vertices[v].step;
    v = *vertices[v].parent;
  }
  return a;
}

Unfolding unfold(const TreePresentation& p, const UnfoldOptions& options) {
  const auto rays = ray_states(p);
  Unfolding out;
  out.options = options;
  TreeBuilder builder;
  std::vector<std::size_t> level_count(options.depth + 1, 0);
  auto id_for = [&](std::size_t state, std::size_t depth) {
    return p.name(state) + "/" + std::to_string(depth) + "/" + std::to_string(level_count[depth]++);
  };

  builder.add_root(id_for(p.root(), 0));
  out.vertices.push_back({p.root(), 0, std::nullopt, {}, root_class(p), {}});
  for (Vertex v = 0; v < out.vertices.size(); ++v) {
    if (out.vertices[v].depth >= options.depth) continue;
    const auto parent = out.vertices[v];
    const auto& slots = p.state(parent.state).slots;
    for (std::uint32_t k = 0; k < slots.size(); ++k) {
      Multiplicity m = slots[k].multiplicity;
      std::uint64_t copies =
          options.multiplicity_cap ? m.capped(*options.multiplicity_cap).value()
                                   : m.materialized(options.omega_width);
      OccurrenceClass cls = child_class(p, rays, parent.cls, k);
      for (std::uint64_t c = 0; c < copies; ++c) {
        if (out.vertices.size() >= options.max_vertices) throw BudgetExceeded(options.max_vertices);
        Vertex child = builder.add_child(v, id_for(slots[k].state, parent.depth + 1));
        out.vertices.push_back({slots[k].state, parent.depth + 1, v, {k, c}, cls, {}});
        out.vertices[v].children.push_back(child);
      }
    }
  }
  out.tree = {std::move(builder).build(), 0};
  return out;
}

Unfolding unfold(const TreePresentation& p, std::size_t depth) {
  UnfoldOptions options;
  options.depth = depth;
  return unfold(p, options);
}

}  // namespace arbor
