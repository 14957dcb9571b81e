#include "arbor/pruning.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <stdexcept>

namespace arbor {

std::uint64_t RankValue::value() const {
  if (omega_) throw std::logic_error("rank is omega");
  return value_;
}

std::string RankValue::to_string() const {
  return omega_ ? "Omega" : "Finite(" + std::to_string(value_) + ")";
}

FiniteTree prune_step(const FiniteTree& t) {
  std::vector<bool> keep(t.size());
  for (Vertex v = 0; v < t.size(); ++v) keep[v] = t.degree(v) >= 2;
  return t.induced(keep);
}

PruningResult pruning_trace(const FiniteTree& t) {
  PruningResult out;
  auto& trace = out.trace;
  trace.removal_round.assign(t.size(), 0);
  std::vector<std::size_t> degree(t.size());
  std::vector<Vertex> frontier;
  for (Vertex v = 0; v < t.size(); ++v) {
    degree[v] = t.degree(v);
    if (degree[v] <= 1) frontier.push_back(v);
  }
  // Peel layer by layer: a vertex joins the next round the moment its live
  // degree drops to 1.
  while (!frontier.empty()) {
    const std::size_t round = trace.rounds.size() + 1;
    for (Vertex v : frontier) trace.removal_round[v] = round;
    std::vector<Vertex> next;
    for (Vertex v : frontier) {
      for (Vertex u : t.neighbors(v)) {
        if (trace.removal_round[u] != 0) continue;
        if (--degree[u] == 1) next.push_back(u);
      }
    }
    std::sort(frontier.begin(), frontier.end());
    trace.rounds.push_back(std::move(frontier));
    frontier = std::move(next);
  }
  out.rank = RankValue::finite(trace.rounds.size());
  return out;
}

FiniteTree pruning_stage(const FiniteTree& t, const PruningTrace& trace, std::size_t k) {
  std::vector<bool> keep(t.size());
  for (Vertex v = 0; v < t.size(); ++v) {
    keep[v] = trace.removal_round[v] == 0 || trace.removal_round[v] > k;
  }
  return t.induced(keep);
}

CoreClassification classify_core(const TreePresentation& p) {
  ClassGraph g(p);
  CoreClassification out;
  out.ray_states = g.rays();
  for (const auto& c : g.nodes()) {
    if (ray_children(p, g.rays(), c.state) + (c.up_ray ? 1 : 0) >= 2) out.core_classes.insert(c);
  }
  return out;
}

std::string_view to_string(EndCategory e) {
  switch (e) {
    case EndCategory::zero_ends: return "ZeroEnds";
    case EndCategory::one_end: return "OneEnd";
    case EndCategory::many_ends: return "ManyEnds";
  }
  return "unknown";
}

EndCategory end_category(const TreePresentation& p) {
  if (!ray_states(p)[p.root()]) return EndCategory::zero_ends;
  if (!classify_core(p).core_classes.empty()) return EndCategory::many_ends;
  return EndCategory::one_end;
}

std::vector<std::optional<std::uint64_t>> rayless_heights(const TreePresentation& p) {
  const auto rays = ray_states(p);
  std::vector<std::optional<std::uint64_t>> h(p.state_count());
  std::function<std::uint64_t(std::size_t)> height = [&](std::size_t s) -> std::uint64_t {
    if (h[s]) return *h[s];
    std::uint64_t best = 0;
    for (const auto& slot : p.state(s).slots) best = std::max(best, 1 + height(slot.state));
    h[s] = best;
    return best;
  };
  for (std::size_t s = 0; s < p.state_count(); ++s) {
    if (!rays[s]) height(s);
  }
  return h;
}

namespace {

constexpr std::uint64_t kInfinite = std::numeric_limits<std::uint64_t>::max();

// Far distances at a vertex: the up direction (0 when absent) and each
// child direction, repeated once for a second copy.
struct Directions {
  std::uint64_t up = 0;
  std::vector<std::uint64_t> down;  // per slot
  std::vector<bool> doubled;        // per slot: multiplicity >= 2

  std::uint64_t second_largest() const {
    std::uint64_t a = up, b = 0;
    auto push = [&](std::uint64_t x) {
      if (x > a) {
        b = a;
        a = x;
      } else if (x > b) {
        b = x;
      }
    };
    for (std::size_t k = 0; k < down.size(); ++k) {
      push(down[k]);
      if (doubled[k]) push(down[k]);
    }
    return b;
  }

  /// Far distance of the up direction seen from a child through `slot`.
  std::uint64_t up_for_child(std::size_t slot) const {
    std::uint64_t best = up;
    for (std::size_t k = 0; k < down.size(); ++k) {
      if (k != slot || doubled[k]) best = std::max(best, down[k]);
    }
    return best == kInfinite ? kInfinite : best + 1;
  }
};

Directions directions(const TreePresentation& p, const std::vector<std::optional<std::uint64_t>>& h,
                      std::size_t state, std::uint64_t up) {
  Directions d;
  d.up = up;
  for (const auto& slot : p.state(state).slots) {
    d.down.push_back(h[slot.state] ? 1 + *h[slot.state] : kInfinite);
    d.doubled.push_back(slot.multiplicity != Multiplicity::finite(1));
  }
  return d;
}

std::optional<std::uint64_t> round_of(const Directions& d) {
  std::uint64_t second = d.second_largest();
  if (second == kInfinite) return std::nullopt;
  return second + 1;
}

}  // namespace

std::optional<std::uint64_t> removal_round(const TreePresentation& p, const Address& a) {
  if (!valid_address(p, a)) throw std::out_of_range("invalid address " + to_string(a));
  const auto h = rayless_heights(p);
  std::size_t state = p.root();
  std::uint64_t up = 0;
  for (const auto& step : a) {
    up = directions(p, h, state, up).up_for_child(step.slot);
    state = p.state(state).slots[step.slot].state;
  }
  return round_of(directions(p, h, state, up));
}

RankValue rank_of_presentation(const TreePresentation& p) {
  if (end_category(p) == EndCategory::one_end) return RankValue::omega();
  const auto h = rayless_heights(p);
  // Vertices with a finite up distance sit at bounded depth (rayless trees,
  // or the chain above the core), so this search over (state, up) ends.
  std::set<std::pair<std::size_t, std::uint64_t>> seen;
  std::vector<std::pair<std::size_t, std::uint64_t>> stack{{p.root(), 0}};
  std::uint64_t rank = 0;
  while (!stack.empty()) {
    auto [state, up] = stack.back();
    stack.pop_back();
    if (!seen.insert({state, up}).second) continue;
    Directions d = directions(p, h, state, up);
    if (auto r = round_of(d)) rank = std::max(rank, *r);
    const auto& slots = p.state(state).slots;
    for (std::size_t k = 0; k < slots.size(); ++k) stack.emplace_back(slots[k].state, d.up_for_child(k));
  }
  return RankValue::finite(rank);
}

}  // namespace arbor
