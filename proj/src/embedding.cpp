#include "arbor/embedding.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace arbor {

std::vector<int> maximum_matching(const std::vector<std::vector<int>>& candidates, int right_count) {
  std::vector<int> left_match(candidates.size(), -1);
  std::vector<int> right_match(right_count, -1);
  std::vector<char> visited;
  std::function<bool(int)> augment = [&](int u) {
    for (int v : candidates[u]) {
      if (visited[v]) continue;
      visited[v] = 1;
      if (right_match[v] < 0 || augment(right_match[v])) {
        right_match[v] = u;
        left_match[u] = v;
        return true;
      }
    }
    return false;
  };
  for (int u = 0; u < static_cast<int>(candidates.size()); ++u) {
    visited.assign(right_count, 0);
    augment(u);
  }
  return left_match;
}

namespace {

// fits(u, x, from): the subtree of t below u (away from its parent) embeds
// into s with u -> x, avoiding the neighbour of x at index `from`
// (from == deg(x) when nothing is excluded).
class RootedDp {
 public:
  RootedDp(const FiniteTree& t, Vertex t_root, const FiniteTree& s) : t_(t), s_(s) {
    parent_.assign(t.size(), t.size());
    children_.resize(t.size());
    std::vector<Vertex> order{t_root};
    parent_[t_root] = t_root;
    for (std::size_t i = 0; i < order.size(); ++i) {
      for (Vertex c : t.neighbors(order[i])) {
        if (parent_[c] == t.size()) {
          parent_[c] = order[i];
          children_[order[i]].push_back(c);
          order.push_back(c);
        }
      }
    }
    offset_.resize(s.size() + 1, 0);
    for (Vertex x = 0; x < s.size(); ++x) offset_[x + 1] = offset_[x] + s.degree(x) + 1;
    memo_.assign(t.size() * offset_[s.size()], -1);
  }

  bool fits(Vertex u, Vertex x, std::size_t from) {
    signed char& m = memo_[u * offset_[s_.size()] + offset_[x] + from];
    if (m < 0) m = solve(u, x, from, nullptr) ? 1 : 0;
    return m == 1;
  }

  void build(Vertex u, Vertex x, std::size_t from, std::vector<Vertex>& map) {
    map[u] = x;
    std::vector<std::pair<Vertex, Vertex>> pairs;
    solve(u, x, from, &pairs);
    for (auto [c, y] : pairs) {
      const auto& ny = s_.neighbors(y);
      std::size_t back = 0;
      while (ny[back] != x) ++back;
      build(c, y, back, map);
    }
  }

 private:
  bool solve(Vertex u, Vertex x, std::size_t from, std::vector<std::pair<Vertex, Vertex>>* out) {
    const auto& kids = children_[u];
    const auto& nx = s_.neighbors(x);
    if (kids.size() + (from < nx.size() ? 1 : 0) > nx.size()) return false;
    std::vector<std::vector<int>> cand(kids.size());
    for (std::size_t i = 0; i < kids.size(); ++i) {
      for (std::size_t j = 0; j < nx.size(); ++j) {
        if (j == from) continue;
        Vertex y = nx[j];
        const auto& ny = s_.neighbors(y);
        std::size_t back = 0;
        while (ny[back] != x) ++back;
        if (fits(kids[i], y, back)) cand[i].push_back(static_cast<int>(j));
      }
    }
    auto match = maximum_matching(cand, static_cast<int>(nx.size()));
    for (std::size_t i = 0; i < kids.size(); ++i) {
      if (match[i] < 0) return false;
      if (out) out->emplace_back(kids[i], nx[match[i]]);
    }
    return true;
  }

  const FiniteTree& t_;
  const FiniteTree& s_;
  std::vector<Vertex> parent_;
  std::vector<std::vector<Vertex>> children_;
  std::vector<std::size_t> offset_;
  std::vector<signed char> memo_;
};

}  // namespace

std::optional<ExactWitness> rooted_embeds(const RootedFiniteTree& t, const RootedFiniteTree& s) {
  if (t.tree.empty()) return ExactWitness{};
  if (s.tree.empty() || t.tree.size() > s.tree.size()) return std::nullopt;
  RootedDp dp(t.tree, t.root, s.tree);
  const std::size_t none = s.tree.degree(s.root);
  if (!dp.fits(t.root, s.root, none)) return std::nullopt;
  ExactWitness w{std::vector<Vertex>(t.tree.size())};
  dp.build(t.root, s.root, none, w.map);
  return w;
}

std::optional<ExactWitness> embeds(const FiniteTree& t, const FiniteTree& s) {
  if (t.empty()) return ExactWitness{};
  if (t.size() > s.size()) return std::nullopt;
  // Every embedding sends vertex 0 somewhere; try each image.
  RootedDp dp(t, 0, s);
  for (Vertex x = 0; x < s.size(); ++x) {
    if (!dp.fits(0, x, s.degree(x))) continue;
    ExactWitness w{std::vector<Vertex>(t.size())};
    dp.build(0, x, s.degree(x), w.map);
    return w;
  }
  return std::nullopt;
}

bool equimorphic_finite(const FiniteTree& t, const FiniteTree& s) {
  return embeds(t, s).has_value() && embeds(s, t).has_value();
}

bool verify_witness(const ExactWitness& w, const FiniteTree& t, const FiniteTree& s) {
  if (w.map.size() != t.size()) return false;
  std::set<Vertex> image;
  for (Vertex v : w.map) {
    if (v >= s.size() || !image.insert(v).second) return false;
  }
  for (auto [u, v] : t.edges()) {
    const auto& n = s.neighbors(w.map[u]);
    if (std::find(n.begin(), n.end(), w.map[v]) == n.end()) return false;
  }
  return true;
}

}  // namespace arbor
