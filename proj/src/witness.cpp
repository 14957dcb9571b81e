#include "arbor/witness.hpp"

#include <algorithm>
#include <deque>
#include <limits>

#include "arbor/pruning.hpp"
#include "arbor/unfold.hpp"

namespace arbor {

namespace {

__extension__ typedef unsigned __int128 Flow;

// Edmonds-Karp on a dense capacity matrix; small graphs only.
Flow max_flow(std::vector<std::vector<Flow>>& cap, std::size_t s, std::size_t t) {
  const std::size_t n = cap.size();
  Flow total = 0;
  for (;;) {
    std::vector<std::size_t> prev(n, n);
    prev[s] = s;
    std::deque<std::size_t> queue{s};
    while (!queue.empty() && prev[t] == n) {
      std::size_t u = queue.front();
      queue.pop_front();
      for (std::size_t v = 0; v < n; ++v) {
        if (prev[v] == n && cap[u][v] > 0) {
          prev[v] = u;
          queue.push_back(v);
        }
      }
    }
    if (prev[t] == n) return total;
    Flow push = std::numeric_limits<Flow>::max();
    for (std::size_t v = t; v != s; v = prev[v]) push = std::min(push, cap[prev[v]][v]);
    for (std::size_t v = t; v != s; v = prev[v]) {
      cap[prev[v]][v] -= push;
      cap[v][prev[v]] += push;
    }
    total += push;
  }
}

}  // namespace

std::optional<ChildAssignment> child_assignment(
    const TreePresentation& src, const std::vector<bool>& src_rays, const OccurrenceClass& a,
    const TreePresentation& tgt, const std::vector<bool>& tgt_rays, const OccurrenceClass& b,
    const std::function<bool(const OccurrenceClass&, const OccurrenceClass&)>& allowed) {
  const auto& ss = src.state(a.state).slots;
  const auto& ts = tgt.state(b.state).slots;
  std::vector<OccurrenceClass> sc, tc;
  for (std::size_t k = 0; k < ss.size(); ++k) sc.push_back(child_class(src, src_rays, a, k));
  for (std::size_t j = 0; j < ts.size(); ++j) tc.push_back(child_class(tgt, tgt_rays, b, j));

  ChildAssignment out(ss.size());
  std::vector<std::vector<std::size_t>> absorbed(ts.size());
  std::vector<std::size_t> finite_demand;
  for (std::size_t k = 0; k < ss.size(); ++k) {
    std::optional<std::size_t> home;
    for (std::size_t j = 0; j < ts.size() && !home; ++j) {
      if (ts[j].multiplicity.is_omega() && allowed(sc[k], tc[j])) home = j;
    }
    if (home) {
      absorbed[*home].push_back(k);
    } else if (ss[k].multiplicity.is_omega()) {
      return std::nullopt;
    } else {
      finite_demand.push_back(k);
    }
  }

  if (!finite_demand.empty()) {
    // Nodes: 0 source, 1..D demands, D+1..D+T target slots, last sink.
    const std::size_t d = finite_demand.size(), t = ts.size(), sink = d + t + 1;
    std::vector<std::vector<Flow>> cap(sink + 1, std::vector<Flow>(sink + 1, 0));
    Flow need = 0;
    for (std::size_t i = 0; i < d; ++i) {
      const std::size_t k = finite_demand[i];
      cap[0][1 + i] = ss[k].multiplicity.value();
      need += ss[k].multiplicity.value();
      for (std::size_t j = 0; j < t; ++j) {
        if (ts[j].multiplicity.is_finite() && allowed(sc[k], tc[j])) {
          cap[1 + i][1 + d + j] = std::numeric_limits<std::uint64_t>::max();
        }
      }
    }
    for (std::size_t j = 0; j < t; ++j) {
      if (ts[j].multiplicity.is_finite()) cap[1 + d + j][sink] = ts[j].multiplicity.value();
    }
    auto residual = cap;
    if (max_flow(residual, 0, sink) != need) return std::nullopt;
    std::vector<std::uint64_t> used(t, 0);
    for (std::size_t j = 0; j < t; ++j) {
      for (std::size_t i = 0; i < d; ++i) {
        const Flow sent = cap[1 + i][1 + d + j] - residual[1 + i][1 + d + j];
        if (cap[1 + i][1 + d + j] == 0 || sent == 0) continue;
        const auto n = static_cast<std::uint64_t>(sent);
        out[finite_demand[i]].push_back({static_cast<std::uint32_t>(j), Multiplicity::finite(n), used[j], 1});
        used[j] += n;
      }
    }
    for (std::size_t i = 0; i < d; ++i) {
      auto& pieces = out[finite_demand[i]];
      std::sort(pieces.begin(), pieces.end(),
                [](const Piece& x, const Piece& y) { return x.target_slot < y.target_slot; });
    }
  }
  for (std::size_t j = 0; j < ts.size(); ++j) {
    const auto stride = static_cast<std::uint64_t>(absorbed[j].size());
    for (std::size_t i = 0; i < absorbed[j].size(); ++i) {
      const std::size_t k = absorbed[j][i];
      out[k].push_back({static_cast<std::uint32_t>(j), ss[k].multiplicity, i, stride});
    }
  }
  return out;
}

Simulation::Simulation(const TreePresentation& src, const TreePresentation& tgt, bool core_respecting)
    : src_(src), tgt_(tgt), src_rays_(ray_states(src)), tgt_rays_(ray_states(tgt)) {
  ClassGraph sg(src_), tg(tgt_);
  const auto src_core = classify_core(src_);
  const auto tgt_core = classify_core(tgt_);
  for (const auto& a : sg.nodes()) {
    for (const auto& b : tg.nodes()) {
      if (core_respecting && src_core.is_core(a) && !tgt_core.is_core(b)) continue;
      pairs_.insert({a, b});
    }
  }
  auto allowed = [this](const OccurrenceClass& x, const OccurrenceClass& y) {
    return pairs_.count({x, y}) > 0;
  };
  for (bool changed = true; changed;) {
    changed = false;
    for (auto it = pairs_.begin(); it != pairs_.end();) {
      if (!child_assignment(src_, src_rays_, it->first, tgt_, tgt_rays_, it->second, allowed)) {
        it = pairs_.erase(it);
        changed = true;
      } else {
        ++it;
      }
    }
  }
  for (const auto& pr : pairs_) {
    assignments_.emplace(pr, *child_assignment(src_, src_rays_, pr.first, tgt_, tgt_rays_, pr.second, allowed));
  }
}

bool Simulation::contains(const OccurrenceClass& a, const OccurrenceClass& b) const {
  return pairs_.count({a, b}) > 0;
}

const ChildAssignment& Simulation::assignment(const OccurrenceClass& a, const OccurrenceClass& b) const {
  auto it = assignments_.find({a, b});
  if (it == assignments_.end()) throw std::out_of_range("class pair not related");
  return it->second;
}

Address Simulation::image(const Address& root_image, const Address& a) const {
  OccurrenceClass x = root_class(src_);
  OccurrenceClass y = class_at(tgt_, tgt_rays_, root_image);
  Address out = root_image;
  for (const auto& step : a) {
    const auto& pieces = assignment(x, y).at(step.slot);
    std::uint64_t start = 0;
    const Piece* hit = nullptr;
    for (const auto& piece : pieces) {
      if (piece.count.is_omega() || step.copy < start + piece.count.value()) {
        hit = &piece;
        break;
      }
      start += piece.count.value();
    }
    if (!hit) throw std::out_of_range("copy outside the slot: " + to_string(a));
    out.push_back({hit->target_slot, hit->base + (step.copy - start) * hit->stride});
    x = child_class(src_, src_rays_, x, step.slot);
    y = child_class(tgt_, tgt_rays_, y, hit->target_slot);
  }
  return out;
}

bool is_simulation(const TreePresentation& src, const TreePresentation& tgt, const ClassPairSet& ext) {
  const auto sr = ray_states(src), tr = ray_states(tgt);
  auto allowed = [&](const OccurrenceClass& x, const OccurrenceClass& y) { return ext.count({x, y}) > 0; };
  for (const auto& [a, b] : ext) {
    if (a.state >= src.state_count() || b.state >= tgt.state_count()) return false;
    if (!child_assignment(src, sr, a, tgt, tr, b, allowed)) return false;
  }
  return true;
}

std::optional<WitnessRule> downward_rule(std::shared_ptr<const Simulation> sim, const Address& root_image) {
  if (!valid_address(sim->target(), root_image)) return std::nullopt;
  if (!sim->contains(root_class(sim->source()), class_at(sim->target(), root_image))) return std::nullopt;
  WitnessRule rule;
  rule.image = [sim, root_image](const Address& a) { return sim->image(root_image, a); };
  return rule;
}

WitnessRule compose(const WitnessRule& outer, const WitnessRule& inner) {
  WitnessRule rule;
  rule.image = [outer, inner](const Address& a) { return outer.image(inner.image(a)); };
  rule.pinned = [outer, inner](const Address& a) { return inner.pinned(a) || outer.pinned(inner.image(a)); };
  return rule;
}

TruncatedWitness materialize(const WitnessRule& rule, const TreePresentation& src,
                             const TreePresentation& tgt, std::size_t depth, std::uint64_t width,
                             std::size_t max_vertices) {
  UnfoldOptions options;
  options.depth = depth;
  options.omega_width = width;
  options.max_vertices = max_vertices;
  const Unfolding u = unfold(src, options);
  TruncatedWitness w;
  w.depth = depth;
  w.width = width;
  std::vector<Address> addr(u.size());
  for (Vertex v = 0; v < u.size(); ++v) {
    if (auto parent = u.at(v).parent) {
      addr[v] = addr[*parent];
      addr[v].push_back(u.at(v).step);
    }
    w.entries.push_back({addr[v], rule.image(addr[v]), rule.pinned(addr[v])});
  }
  w.extension = Simulation(src, tgt, true).pairs();
  return w;
}

std::optional<TruncatedWitness> find_rooted_witness(const TreePresentation& src,
                                                    const TreePresentation& tgt,
                                                    const Address& root_image, std::size_t depth,
                                                    std::uint64_t width) {
  auto sim = std::make_shared<const Simulation>(src, tgt, true);
  auto rule = downward_rule(sim, root_image);
  if (!rule) return std::nullopt;
  return materialize(*rule, src, tgt, depth, width);
}

namespace {

bool is_parent_of(const Address& parent, const Address& child) {
  return child.size() == parent.size() + 1 && std::equal(parent.begin(), parent.end(), child.begin());
}

WitnessCheck fail(std::string reason) { return {false, std::move(reason)}; }

}  // namespace

WitnessCheck verify_witness(const TruncatedWitness& w, const TreePresentation& src,
                            const TreePresentation& tgt, std::size_t depth) {
  if (depth > w.depth) throw DepthExceedsWitness(depth, w.depth);
  std::map<Address, const MapEntry*> table;
  for (const auto& e : w.entries) {
    if (e.source.size() <= depth) table[e.source] = &e;
  }
  UnfoldOptions options;
  options.depth = depth;
  options.omega_width = w.width;
  options.max_vertices = table.size() + 1;
  Unfolding u;
  try {
    u = unfold(src, options);
  } catch (const BudgetExceeded&) {
    return fail("witness has fewer entries than the truncation has vertices");
  }
  const auto tgt_rays = ray_states(tgt);
  std::set<Address> images;
  std::vector<Address> addr(u.size());
  std::vector<const MapEntry*> entry(u.size());
  for (Vertex v = 0; v < u.size(); ++v) {
    const auto& vx = u.at(v);
    if (vx.parent) {
      addr[v] = addr[*vx.parent];
      addr[v].push_back(vx.step);
    }
    auto it = table.find(addr[v]);
    if (it == table.end()) return fail("no entry for " + to_string(addr[v]));
    entry[v] = it->second;
    const Address& image = entry[v]->target;
    if (!valid_address(tgt, image)) return fail("invalid target " + to_string(image));
    if (!images.insert(image).second) return fail("two vertices map to " + to_string(image));
    if (vx.parent) {
      const Address& up = entry[*vx.parent]->target;
      if (!is_parent_of(up, image) && !is_parent_of(image, up)) {
        return fail("edge at " + to_string(addr[v]) + " is not preserved");
      }
    }
    const bool frontier = vx.depth == depth && !src.state(vx.state).slots.empty();
    if (frontier && !entry[v]->pinned) {
      if (vx.parent && !is_parent_of(entry[*vx.parent]->target, image)) {
        return fail("frontier vertex " + to_string(addr[v]) + " is not mapped downward");
      }
      if (!w.extension.count({vx.cls, class_at(tgt, tgt_rays, image)})) {
        return fail("frontier vertex " + to_string(addr[v]) + " has no extension");
      }
    }
  }
  if (!is_simulation(src, tgt, w.extension)) return fail("extension relation is not a simulation");
  return {};
}

bool core_respecting(const TruncatedWitness& w, const TreePresentation& src,
                     const TreePresentation& tgt, std::size_t depth) {
  const auto sc = classify_core(src), tc = classify_core(tgt);
  const auto sr = ray_states(src), tr = ray_states(tgt);
  for (const auto& e : w.entries) {
    if (e.source.size() > depth) continue;
    if (sc.is_core(class_at(src, sr, e.source)) && !tc.is_core(class_at(tgt, tr, e.target))) return false;
  }
  return std::none_of(w.extension.begin(), w.extension.end(),
                      [&](const auto& pr) { return sc.is_core(pr.first) && !tc.is_core(pr.second); });
}

}  // namespace arbor
