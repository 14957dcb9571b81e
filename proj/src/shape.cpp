#include "arbor/shape.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace arbor {

Shape::Shape() { root_ = add({}); }

std::size_t Shape::add(std::vector<Child> children) {
  std::map<std::size_t, Multiplicity> merged;
  for (const auto& c : children) {
    if (c.node >= nodes_.size()) throw std::out_of_range("shape child out of range");
    if (!c.multiplicity.is_zero()) merged[c.node] += c.multiplicity;
  }
  std::vector<Child> sorted;
  for (auto [node, m] : merged) sorted.push_back({node, m});
  std::sort(sorted.begin(), sorted.end(), [&](const Child& a, const Child& b) {
    if (codes_[a.node] != codes_[b.node]) return codes_[a.node] < codes_[b.node];
    return a.multiplicity < b.multiplicity;
  });
  std::string code = "(";
  std::uint64_t height = 0;
  for (const auto& c : sorted) {
    if (c.multiplicity != Multiplicity::finite(1)) code += c.multiplicity.to_string();
    code += codes_[c.node];
    height = std::max(height, heights_[c.node] + 1);
  }
  code += ")";
  auto it = index_.find(code);
  if (it != index_.end()) return it->second;
  nodes_.push_back(std::move(sorted));
  codes_.push_back(code);
  heights_.push_back(height);
  index_.emplace(std::move(code), nodes_.size() - 1);
  return nodes_.size() - 1;
}

void Shape::set_root(std::size_t node) {
  if (node >= nodes_.size()) throw std::out_of_range("shape root out of range");
  root_ = node;
}

std::size_t Shape::import(const Shape& other, std::size_t node) {
  std::map<std::size_t, std::size_t> memo;
  std::function<std::size_t(std::size_t)> copy = [&](std::size_t n) -> std::size_t {
    if (auto it = memo.find(n); it != memo.end()) return it->second;
    std::vector<Child> kids;
    for (const auto& c : other.children(n)) kids.push_back({copy(c.node), c.multiplicity});
    return memo[n] = add(std::move(kids));
  };
  return copy(node);
}

namespace {

class StateNodes {
 public:
  StateNodes(const TreePresentation& p, Shape& shape) : p_(p), shape_(shape), rays_(ray_states(p)) {}

  bool ray(std::size_t s) const { return rays_[s]; }

  std::size_t node(std::size_t s) {
    if (rays_[s]) throw std::invalid_argument("state '" + p_.name(s) + "' carries a ray");
    if (auto it = memo_.find(s); it != memo_.end()) return it->second;
    std::vector<Shape::Child> kids;
    for (const auto& slot : p_.state(s).slots) kids.push_back({node(slot.state), slot.multiplicity});
    return memo_[s] = shape_.add(std::move(kids));
  }

 private:
  const TreePresentation& p_;
  Shape& shape_;
  std::vector<bool> rays_;
  std::map<std::size_t, std::size_t> memo_;
};

Multiplicity minus_one(Multiplicity m) {
  if (m.is_omega()) return m;
  return Multiplicity::finite(m.value() - 1);
}

}  // namespace

Shape shape_of_state(const TreePresentation& p, std::size_t state) {
  Shape shape;
  StateNodes nodes(p, shape);
  shape.set_root(nodes.node(state));
  return shape;
}

Shape shape_at(const TreePresentation& p, const Address& a, const ShapeView& view) {
  const OccurrenceClass cls = class_at(p, a);
  std::vector<std::size_t> path{p.root()};
  for (const auto& step : a) path.push_back(p.state(path.back()).slots[step.slot].state);

  Shape shape;
  StateNodes nodes(p, shape);
  // up(i): the vertex at depth i seen from its child along the path.
  std::function<std::size_t(std::size_t)> up = [&](std::size_t i) -> std::size_t {
    std::vector<Shape::Child> kids;
    const auto& slots = p.state(path[i]).slots;
    for (std::size_t k = 0; k < slots.size(); ++k) {
      Multiplicity m = k == a[i].slot ? minus_one(slots[k].multiplicity) : slots[k].multiplicity;
      if (!m.is_zero()) kids.push_back({nodes.node(slots[k].state), m});
    }
    if (i > 0) kids.push_back({up(i - 1), Multiplicity::finite(1)});
    return shape.add(std::move(kids));
  };

  std::vector<Shape::Child> kids;
  const auto& slots = p.state(path.back()).slots;
  for (std::size_t k = 0; k < slots.size(); ++k) {
    Multiplicity m = slots[k].multiplicity;
    if (view.drop_one_copy_of_slot == k) m = minus_one(m);
    if (m.is_zero()) continue;
    if (nodes.ray(slots[k].state)) {
      if (view.rayless_only) continue;
      throw std::invalid_argument("direction toward '" + p.name(slots[k].state) + "' carries a ray");
    }
    kids.push_back({nodes.node(slots[k].state), m});
  }
  if (view.include_up && !a.empty()) {
    if (!cls.up_ray) {
      kids.push_back({up(a.size() - 1), Multiplicity::finite(1)});
    } else if (!view.rayless_only) {
      throw std::invalid_argument("parent direction carries a ray");
    }
  }
  shape.set_root(shape.add(std::move(kids)));
  return shape;
}

TreePresentation to_presentation(const Shape& s) {
  std::vector<State> states;
  for (std::size_t n = 0; n < s.size(); ++n) {
    State st{"h" + std::to_string(n), {}};
    for (const auto& c : s.children(n)) st.slots.push_back({c.node, c.multiplicity});
    states.push_back(std::move(st));
  }
  return drop_unreachable(TreePresentation(std::move(states), s.root()));
}

Shape truncate(const Shape& s, std::uint64_t depth) {
  Shape out;
  std::map<std::pair<std::size_t, std::uint64_t>, std::size_t> memo;
  std::function<std::size_t(std::size_t, std::uint64_t)> cut = [&](std::size_t n,
                                                                    std::uint64_t left) -> std::size_t {
    if (auto it = memo.find({n, left}); it != memo.end()) return it->second;
    std::vector<Shape::Child> kids;
    if (left > 0) {
      for (const auto& c : s.children(n)) kids.push_back({cut(c.node, left - 1), c.multiplicity});
    }
    return memo[{n, left}] = out.add(std::move(kids));
  };
  out.set_root(cut(s.root(), depth));
  return out;
}

RankValue shape_rank(const Shape& s) { return rank_of_presentation(to_presentation(s)); }

std::string center_rooted_form(const TreePresentation& p) {
  if (ray_states(p)[p.root()]) throw std::invalid_argument("presentation carries a ray");
  const std::uint64_t last = rank_of_presentation(p).value();
  // Removal round depends only on the slot path, so copy 0 stands for all.
  std::optional<Address> found;
  std::function<void(Address&)> search = [&](Address& a) {
    if (found) return;
    if (removal_round(p, a) == last) {
      found = a;
      return;
    }
    const auto& slots = p.state(state_at(p, a)).slots;
    for (std::uint32_t k = 0; k < slots.size() && !found; ++k) {
      a.push_back({k, 0});
      search(a);
      a.pop_back();
    }
  };
  Address start;
  search(start);
  Address centre = *found;
  const auto& slots = p.state(state_at(p, centre)).slots;
  for (std::uint32_t k = 0; k < slots.size(); ++k) {
    Address child = centre;
    child.push_back({k, 0});
    if (removal_round(p, child) != last) continue;
    ShapeView near;
    near.drop_one_copy_of_slot = k;
    ShapeView far;
    far.include_up = false;
    std::string x = shape_at(p, centre, near).canonical_form();
    std::string y = shape_at(p, child, far).canonical_form();
    if (y < x) std::swap(x, y);
    return "E[" + x + "|" + y + "]";
  }
  return shape_at(p, centre).canonical_form();
}

}  // namespace arbor
