#include "arbor/finite_tree.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <unordered_map>

namespace arbor {

std::string_view to_string(NotATreeReason reason) {
  switch (reason) {
    case NotATreeReason::cycle: return "cycle";
    case NotATreeReason::disconnected: return "disconnected";
    case NotATreeReason::duplicate_edge: return "duplicate-edge";
    case NotATreeReason::self_loop: return "self-loop";
  }
  return "unknown";
}

NotATree::NotATree(NotATreeReason reason)
    : std::invalid_argument("not a tree: " + std::string(to_string(reason))), reason_(reason) {}

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent_[a] = b;
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
};

std::vector<std::vector<Vertex>> checked_adjacency(std::size_t n,
                                                   std::span<const std::pair<Vertex, Vertex>> edges) {
  std::set<std::pair<Vertex, Vertex>> seen;
  for (auto [u, v] : edges) {
    if (u == v) throw NotATree(NotATreeReason::self_loop);
    if (!seen.emplace(std::min(u, v), std::max(u, v)).second) {
      throw NotATree(NotATreeReason::duplicate_edge);
    }
  }
  DisjointSets sets(n);
  std::vector<std::vector<Vertex>> adj(n);
  for (auto [u, v] : edges) {
    if (!sets.unite(u, v)) throw NotATree(NotATreeReason::cycle);
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  if (n > 0 && edges.size() != n - 1) throw NotATree(NotATreeReason::disconnected);
  return adj;
}

}  // namespace

FiniteTree FiniteTree::from_edges(std::span<const Edge> edges, std::span<const std::string> isolated) {
  std::vector<std::string> ids;
  std::unordered_map<std::string, Vertex> index;
  auto intern = [&](const std::string& id) {
    auto [it, inserted] = index.emplace(id, ids.size());
    if (inserted) ids.push_back(id);
    return it->second;
  };
  std::vector<std::pair<Vertex, Vertex>> pairs;
  pairs.reserve(edges.size());
  for (const auto& [a, b] : edges) pairs.emplace_back(intern(a), intern(b));
  for (const auto& id : isolated) intern(id);
  auto adj = checked_adjacency(ids.size(), pairs);
  return FiniteTree(std::move(ids), std::move(adj));
}

FiniteTree FiniteTree::from_index_edges(std::size_t n,
                                        std::span<const std::pair<Vertex, Vertex>> edges) {
  for (auto [u, v] : edges) {
    if (u >= n || v >= n) throw std::out_of_range("edge endpoint out of range");
  }
  auto adj = checked_adjacency(n, edges);
  std::vector<std::string> ids(n);
  for (std::size_t i = 0; i < n; ++i) ids[i] = std::to_string(i);
  return FiniteTree(std::move(ids), std::move(adj));
}

std::optional<Vertex> FiniteTree::find(std::string_view id) const {
  auto it = std::find(ids_.begin(), ids_.end(), id);
  if (it == ids_.end()) return std::nullopt;
  return static_cast<Vertex>(it - ids_.begin());
}

std::vector<std::pair<Vertex, Vertex>> FiniteTree::edges() const {
  std::vector<std::pair<Vertex, Vertex>> out;
  out.reserve(edge_count());
  for (Vertex u = 0; u < size(); ++u) {
    for (Vertex v : adj_[u]) {
      if (u < v) out.emplace_back(u, v);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

FiniteTree FiniteTree::induced(const std::vector<bool>& keep) const {
  std::vector<Vertex> remap(size(), size());
  std::vector<std::string> ids;
  for (Vertex v = 0; v < size(); ++v) {
    if (keep[v]) {
      remap[v] = ids.size();
      ids.push_back(ids_[v]);
    }
  }
  std::vector<std::vector<Vertex>> adj(ids.size());
  for (Vertex v = 0; v < size(); ++v) {
    if (!keep[v]) continue;
    for (Vertex u : adj_[v]) {
      if (keep[u]) adj[remap[v]].push_back(remap[u]);
    }
  }
  return FiniteTree(std::move(ids), std::move(adj));
}

Vertex TreeBuilder::add_root(std::string id) {
  if (!ids_.empty()) throw std::logic_error("TreeBuilder already has a root");
  ids_.push_back(std::move(id));
  adj_.emplace_back();
  return 0;
}

Vertex TreeBuilder::add_child(Vertex parent, std::string id) {
  Vertex v = ids_.size();
  ids_.push_back(std::move(id));
  adj_.emplace_back();
  adj_.at(parent).push_back(v);
  adj_[v].push_back(parent);
  return v;
}

FiniteTree TreeBuilder::build() && { return FiniteTree(std::move(ids_), std::move(adj_)); }

std::map<std::string, std::size_t> degree_map(const FiniteTree& t) {
  std::map<std::string, std::size_t> out;
  for (Vertex v = 0; v < t.size(); ++v) out[t.id(v)] = t.degree(v);
  return out;
}

namespace {

// BFS order from root plus parent links; parent of root is itself.
std::pair<std::vector<Vertex>, std::vector<Vertex>> bfs_order(const FiniteTree& t, Vertex root) {
  std::vector<Vertex> order{root};
  std::vector<Vertex> parent(t.size(), t.size());
  parent[root] = root;
  for (std::size_t i = 0; i < order.size(); ++i) {
    Vertex v = order[i];
    for (Vertex u : t.neighbors(v)) {
      if (parent[u] == t.size()) {
        parent[u] = v;
        order.push_back(u);
      }
    }
  }
  return {order, parent};
}

}  // namespace

std::string ahu_canonical(const RootedFiniteTree& t) {
  if (t.tree.empty()) throw EmptyTree();
  auto [order, parent] = bfs_order(t.tree, t.root);
  std::vector<std::vector<std::string>> child_codes(t.tree.size());
  std::string code;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    Vertex v = *it;
    auto& kids = child_codes[v];
    std::sort(kids.begin(), kids.end());
    code = "(";
    for (auto& k : kids) code += k;
    code += ")";
    kids.clear();
    kids.shrink_to_fit();
    if (v != t.root) child_codes[parent[v]].push_back(code);
  }
  return code;
}

std::vector<Vertex> centroids(const FiniteTree& t) {
  if (t.empty()) return {};
  auto [order, parent] = bfs_order(t, 0);
  std::vector<std::size_t> below(t.size(), 1);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    if (*it != 0) below[parent[*it]] += below[*it];
  }
  std::size_t best = t.size();
  std::vector<Vertex> out;
  for (Vertex v = 0; v < t.size(); ++v) {
    std::size_t worst = t.size() - below[v];
    for (Vertex u : t.neighbors(v)) {
      if (u != 0 && parent[u] == v) worst = std::max(worst, below[u]);
    }
    if (worst < best) {
      best = worst;
      out = {v};
    } else if (worst == best) {
      out.push_back(v);
    }
  }
  return out;
}

bool isomorphic(const FiniteTree& t, const FiniteTree& s) {
  if (t.size() != s.size()) return false;
  if (t.empty()) return true;
  auto ct = centroids(t);
  auto cs = centroids(s);
  if (ct.size() != cs.size()) return false;
  const std::string code = ahu_canonical({t, ct.front()});
  return std::any_of(cs.begin(), cs.end(),
                     [&](Vertex c) { return ahu_canonical({s, c}) == code; });
}

FiniteTree make_path(std::size_t n) {
  std::vector<std::pair<Vertex, Vertex>> edges;
  for (std::size_t i = 1; i < n; ++i) edges.emplace_back(i - 1, i);
  return FiniteTree::from_index_edges(n, edges);
}

FiniteTree make_star(std::size_t leaves) {
  std::vector<FiniteTree::Edge> edges;
  for (std::size_t i = 0; i < leaves; ++i) edges.emplace_back("c", "l" + std::to_string(i));
  std::vector<std::string> centre{"c"};
  return FiniteTree::from_edges(edges, centre);
}

}  // namespace arbor
