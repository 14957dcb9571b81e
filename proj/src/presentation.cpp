#include "arbor/presentation.hpp"

#include <algorithm>
#include <charconv>
#include <functional>
#include <set>

namespace arbor {

bool is_identifier(std::string_view name) {
  if (name.empty()) return false;
  auto alpha = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; };
  auto digit = [](char c) { return c >= '0' && c <= '9'; };
  if (!alpha(name.front())) return false;
  return std::all_of(name.begin(), name.end(), [&](char c) { return alpha(c) || digit(c); });
}

TreePresentation::TreePresentation(std::vector<State> states, std::size_t root)
    : states_(std::move(states)), root_(root) {
  if (states_.empty()) throw std::invalid_argument("presentation needs at least one state");
  if (root_ >= states_.size()) throw std::invalid_argument("root state out of range");
  std::set<std::string_view> names;
  for (const auto& s : states_) {
    if (!is_identifier(s.name)) throw std::invalid_argument("bad state name '" + s.name + "'");
    if (!names.insert(s.name).second) throw std::invalid_argument("duplicate state '" + s.name + "'");
    for (const auto& slot : s.slots) {
      if (slot.state >= states_.size()) throw std::invalid_argument("slot target out of range");
      if (slot.multiplicity.is_zero()) throw std::invalid_argument("zero multiplicity");
    }
  }
}

std::optional<std::size_t> TreePresentation::find(std::string_view name) const {
  for (std::size_t i = 0; i < states_.size(); ++i) {
    if (states_[i].name == name) return i;
  }
  return std::nullopt;
}

TreePresentation TreePresentation::with_root(std::size_t root) const { return {states_, root}; }

std::string fresh_name(const std::vector<State>& states, std::string_view base) {
  auto taken = [&](const std::string& n) {
    return std::any_of(states.begin(), states.end(), [&](const State& s) { return s.name == n; });
  };
  std::string candidate(base);
  if (!taken(candidate)) return candidate;
  for (std::size_t k = 1;; ++k) {
    candidate = std::string(base) + "_" + std::to_string(k);
    if (!taken(candidate)) return candidate;
  }
}

std::vector<bool> reachable_states(const TreePresentation& p) {
  std::vector<bool> seen(p.state_count(), false);
  std::vector<std::size_t> stack{p.root()};
  seen[p.root()] = true;
  while (!stack.empty()) {
    std::size_t s = stack.back();
    stack.pop_back();
    for (const auto& slot : p.state(s).slots) {
      if (!seen[slot.state]) {
        seen[slot.state] = true;
        stack.push_back(slot.state);
      }
    }
  }
  return seen;
}

TreePresentation drop_unreachable(const TreePresentation& p) {
  auto keep = reachable_states(p);
  std::vector<std::size_t> remap(p.state_count(), 0);
  std::vector<State> states;
  for (std::size_t s = 0; s < p.state_count(); ++s) {
    if (keep[s]) {
      remap[s] = states.size();
      states.push_back(p.state(s));
    }
  }
  for (auto& s : states) {
    for (auto& slot : s.slots) slot.state = remap[slot.state];
  }
  return {std::move(states), remap[p.root()]};
}

std::string to_string(const Address& a) {
  if (a.empty()) return "/";
  std::string out;
  for (const auto& step : a) {
    out += "/" + std::to_string(step.slot) + "." + std::to_string(step.copy);
  }
  return out;
}

Address parse_address(std::string_view text) {
  auto bad = [&] { return std::invalid_argument("bad address '" + std::string(text) + "'"); };
  if (text.empty() || text.front() != '/') throw bad();
  Address a;
  if (text == "/") return a;
  std::size_t pos = 0;
  while (pos < text.size()) {
    if (text[pos] != '/') throw bad();
    ++pos;
    std::uint64_t parts[2] = {0, 0};
    for (int k = 0; k < 2; ++k) {
      auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + text.size(), parts[k]);
      if (ec != std::errc() || ptr == text.data() + pos) throw bad();
      pos = static_cast<std::size_t>(ptr - text.data());
      if (k == 0) {
        if (pos >= text.size() || text[pos] != '.') throw bad();
        ++pos;
      }
    }
    if (parts[0] > UINT32_MAX) throw bad();
    a.push_back({static_cast<std::uint32_t>(parts[0]), parts[1]});
  }
  return a;
}

bool valid_address(const TreePresentation& p, const Address& a) {
  std::size_t s = p.root();
  for (const auto& step : a) {
    const auto& slots = p.state(s).slots;
    if (step.slot >= slots.size()) return false;
    const auto& m = slots[step.slot].multiplicity;
    if (m.is_finite() && step.copy >= m.value()) return false;
    s = slots[step.slot].state;
  }
  return true;
}

std::size_t state_at(const TreePresentation& p, const Address& a) {
  if (!valid_address(p, a)) throw std::out_of_range("invalid address " + to_string(a));
  std::size_t s = p.root();
  for (const auto& step : a) s = p.state(s).slots[step.slot].state;
  return s;
}

std::string to_string(const TreePresentation& p, const OccurrenceClass& c) {
  return p.name(c.state) + (c.up_ray ? "^" : "");
}

std::vector<bool> ray_states(const TreePresentation& p) {
  // Least fixpoint of "rayless": a state is rayless once all its children
  // are. Whatever never becomes rayless reaches a cycle.
  std::vector<bool> rayless(p.state_count(), false);
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t s = 0; s < p.state_count(); ++s) {
      if (rayless[s]) continue;
      const auto& slots = p.state(s).slots;
      if (std::all_of(slots.begin(), slots.end(), [&](const Slot& c) { return rayless[c.state]; })) {
        rayless[s] = true;
        changed = true;
      }
    }
  }
  std::vector<bool> rays(p.state_count());
  for (std::size_t s = 0; s < p.state_count(); ++s) rays[s] = !rayless[s];
  return rays;
}

bool contains_ray_state(const TreePresentation& p, std::size_t s) {
  if (s >= p.state_count()) throw std::out_of_range("state out of range");
  return ray_states(p)[s];
}

std::uint32_t ray_children(const TreePresentation& p, const std::vector<bool>& rays, std::size_t s) {
  std::uint32_t count = 0;
  for (const auto& slot : p.state(s).slots) {
    if (!rays[slot.state]) continue;
    count += slot.multiplicity == Multiplicity::finite(1) ? 1 : 2;
    if (count >= 2) return 2;
  }
  return count;
}

OccurrenceClass child_class(const TreePresentation& p, const std::vector<bool>& rays,
                            const OccurrenceClass& parent, std::size_t slot) {
  const Slot& child = p.state(parent.state).slots.at(slot);
  // The child's parent side holds a ray iff the parent's own parent side
  // does, or another child direction of the parent does.
  std::uint32_t others = ray_children(p, rays, parent.state) - (rays[child.state] ? 1 : 0);
  return {child.state, parent.up_ray || others >= 1};
}

OccurrenceClass root_class(const TreePresentation& p) { return {p.root(), false}; }

OccurrenceClass class_at(const TreePresentation& p, const Address& a) {
  if (!valid_address(p, a)) throw std::out_of_range("invalid address " + to_string(a));
  return class_at(p, ray_states(p), a);
}

OccurrenceClass class_at(const TreePresentation& p, const std::vector<bool>& rays, const Address& a) {
  OccurrenceClass c = root_class(p);
  for (const auto& step : a) c = child_class(p, rays, c, step.slot);
  return c;
}

ClassGraph::ClassGraph(const TreePresentation& p) : rays_(ray_states(p)) {
  auto intern = [&](const OccurrenceClass& c) {
    auto [it, inserted] = index_.emplace(c, nodes_.size());
    if (inserted) {
      nodes_.push_back(c);
      edges_.emplace_back();
    }
    return it->second;
  };
  intern(root_class(p));
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const OccurrenceClass c = nodes_[i];
    const auto& slots = p.state(c.state).slots;
    for (std::size_t k = 0; k < slots.size(); ++k) {
      std::size_t target = intern(child_class(p, rays_, c, k));
      edges_[i].push_back({k, target, slots[k].multiplicity});
    }
  }
}

std::optional<std::size_t> ClassGraph::index(const OccurrenceClass& c) const {
  auto it = index_.find(c);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<Multiplicity> occurrence_counts(const ClassGraph& g) {
  const std::size_t n = g.size();
  // Nodes on a cycle: a node lies on a cycle iff it can reach itself.
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::size_t> stack;
    for (const auto& e : g.edges(i)) stack.push_back(e.target);
    while (!stack.empty()) {
      std::size_t v = stack.back();
      stack.pop_back();
      if (reach[i][v]) continue;
      reach[i][v] = true;
      for (const auto& e : g.edges(v)) stack.push_back(e.target);
    }
  }
  std::vector<bool> infinite(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    if (reach[i][i]) infinite[i] = true;
    for (const auto& e : g.edges(i)) {
      if (e.multiplicity.is_omega()) infinite[e.target] = true;
    }
  }
  // Anything reachable from an infinite node is infinite too.
  for (std::size_t i = 0; i < n; ++i) {
    if (!infinite[i]) continue;
    for (std::size_t v = 0; v < n; ++v) {
      if (reach[i][v]) infinite[v] = true;
    }
  }
  std::vector<std::vector<std::pair<std::size_t, Multiplicity>>> incoming(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& e : g.edges(i)) incoming[e.target].emplace_back(i, e.multiplicity);
  }
  std::vector<std::optional<Multiplicity>> memo(n);
  std::function<Multiplicity(std::size_t)> count = [&](std::size_t v) -> Multiplicity {
    if (infinite[v]) return Multiplicity::omega();
    if (memo[v]) return *memo[v];
    // Finite nodes only have finite, acyclic predecessors.
    Multiplicity total = v == 0 ? Multiplicity::finite(1) : Multiplicity{};
    for (auto [u, m] : incoming[v]) total += count(u) * m;
    memo[v] = total;
    return total;
  };
  std::vector<Multiplicity> out(n);
  for (std::size_t v = 0; v < n; ++v) out[v] = count(v);
  return out;
}

Multiplicity occurrence_count(const TreePresentation& p, const OccurrenceClass& c) {
  ClassGraph g(p);
  auto idx = g.index(c);
  if (!idx) return Multiplicity{};
  return occurrence_counts(g)[*idx];
}

}  // namespace arbor
