#include "arbor/report.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "arbor/unfold.hpp"

namespace arbor {

Json to_json(Multiplicity m) {
  if (m.is_omega()) return "omega";
  return m.value();
}

namespace {

Json to_json(RankValue r) {
  if (r.is_omega()) return "omega";
  return Json{{"finite", r.value()}};
}

Json class_json(const TreePresentation& p, const OccurrenceClass& c) {
  return Json{{"state", p.name(c.state)}, {"up_ray", c.up_ray}};
}

std::string class_list(const TreePresentation& p, const std::set<OccurrenceClass>& classes) {
  std::string out;
  for (const auto& c : classes) out += (out.empty() ? "" : " ") + to_string(p, c);
  return out.empty() ? "(none)" : out;
}

std::string rank_word(RankValue r) { return r.is_omega() ? "omega" : r.to_string(); }

}  // namespace

Json to_json(const NonIsoCertificate& c) {
  Json j{{"kind", std::string(kind_name(c))}};
  struct {
    Json& j;
    void operator()(const RankMismatch& r) const {
      j["first"] = to_json(r.first);
      j["second"] = to_json(r.second);
    }
    void operator()(const MaxLeafDistanceMismatch& m) const {
      j["first"] = m.first;
      j["second"] = m.second;
    }
    void operator()(const DegreeProfileMismatch& d) const {
      j["degree"] = arbor::to_json(d.degree);
      j["first"] = arbor::to_json(d.first);
      j["second"] = arbor::to_json(d.second);
    }
    void operator()(const BranchProfileMismatch& b) const {
      j["branch"] = b.branch;
      j["first"] = arbor::to_json(b.first);
      j["second"] = arbor::to_json(b.second);
    }
  } fill{j};
  std::visit(fill, c);
  return j;
}

Json rank_json(const TreePresentation& p) {
  const auto core = classify_core(p);
  Json classes = Json::array();
  for (const auto& c : core.core_classes) classes.push_back(class_json(p, c));
  return Json{{"rank", to_json(rank_of_presentation(p))},
              {"ends", std::string(to_string(end_category(p)))},
              {"core_classes", classes}};
}

std::string rank_text(const TreePresentation& p) {
  return "rank: " + rank_word(rank_of_presentation(p)) + "\nends: " + std::string(to_string(end_category(p))) +
         "\ncore classes: " + class_list(p, classify_core(p).core_classes) + "\n";
}

Json decompose_json(const TreePresentation& p) {
  const auto rep = leaf_representation(p);
  Json classes = Json::array();
  for (const auto& c : rep.core_classes) classes.push_back(class_json(p, c));
  Json branches = Json::array();
  for (const auto& b : rep.branches) {
    branches.push_back(Json{{"shape", b.shape.canonical_form()},
                            {"attachment", class_json(p, b.attachment)},
                            {"occurrences", to_json(b.occurrences)},
                            {"rank", to_json(branch_rank(b))}});
  }
  return Json{{"core", Json{{"presentation", serialize(rep.core)}, {"classes", classes}}},
              {"top", to_string(rep.top)},
              {"branches", branches},
              {"branch_count", to_json(branch_count(rep))},
              {"max_leaf_distance", max_leaf_distance(rep)},
              {"rank", to_json(rank_of_presentation(p))}};
}

std::string decompose_text(const TreePresentation& p) {
  const auto rep = leaf_representation(p);
  std::ostringstream out;
  std::set<OccurrenceClass> classes(rep.core_classes.begin(), rep.core_classes.end());
  out << "core classes: " << class_list(p, classes) << "\n";
  out << "core: " << serialize(rep.core);
  out << "top: " << to_string(rep.top) << "\n";
  out << "branches: " << rep.branches.size() << "\n";
  for (const auto& b : rep.branches) {
    out << "  " << b.shape.canonical_form() << " at " << to_string(p, b.attachment) << " x"
        << b.occurrences.to_string() << " rank " << rank_word(branch_rank(b)) << "\n";
  }
  out << "branch count: " << branch_count(rep).to_string() << "\n";
  out << "max leaf distance: " << max_leaf_distance(rep) << "\n";
  return out.str();
}

namespace {

Json witness_summary(const TruncatedWitness& w) {
  Json j{{"depth", w.depth}, {"width", w.width}, {"entries", w.entries.size()}};
  j["root_image"] = w.entries.empty() ? Json(nullptr) : Json(to_string(w.entries.front().target));
  std::size_t pinned = 0;
  for (const auto& e : w.entries) pinned += e.pinned ? 1 : 0;
  j["pinned"] = pinned;
  j["extension_pairs"] = w.extension.size();
  return j;
}

}  // namespace

Json family_manifest(const SiblingFamily& f) {
  Json members = Json::array();
  std::vector<std::size_t> depths;
  for (std::size_t i = 0; i < f.members.size(); ++i) {
    const auto& e = f.evidence[i];
    members.push_back(Json{{"label", f.labels[i]},
                           {"file", f.labels[i] + ".tree"},
                           {"presentation", serialize(f.members[i])},
                           {"evidence",
                            Json{{"note", e.note},
                                 {"member_to_base", witness_summary(e.member_to_base)},
                                 {"base_to_member", witness_summary(e.base_to_member)}}}});
    depths.push_back(std::max(e.member_to_base.depth, e.base_to_member.depth));
  }
  Json pairs = Json::array();
  for (const auto& pc : f.pairs) {
    Json j{{"first", f.labels[pc.first]}, {"second", f.labels[pc.second]}, {"certified", pc.certificate.has_value()}};
    j["certificate"] = pc.certificate ? to_json(*pc.certificate) : Json(nullptr);
    pairs.push_back(std::move(j));
  }
  return Json{{"construction", f.construction},
              {"base", Json{{"file", "base.tree"}, {"presentation", serialize(f.base)}}},
              {"members", members},
              {"pairs", pairs},
              {"witness_depths", depths}};
}

std::string family_text(const SiblingFamily& f) {
  std::ostringstream out;
  const std::size_t n = f.members.size();
  std::size_t certified = 0;
  std::vector<std::string> cell(n * n, "-");
  for (const auto& pc : f.pairs) {
    std::string c = pc.certificate ? std::string(1, kind_name(*pc.certificate).front()) : "?";
    certified += pc.certificate ? 1 : 0;
    cell[pc.first * n + pc.second] = cell[pc.second * n + pc.first] = c;
  }
  std::size_t w = 1;
  for (const auto& l : f.labels) w = std::max(w, l.size());
  auto pad = [&](const std::string& s) { return s + std::string(w + 1 - s.size(), ' '); };
  out << f.construction << " family: " << n << " members, " << certified << " of " << f.pairs.size()
      << " pairs certified\n";
  out << pad("");
  for (const auto& l : f.labels) out << pad(l);
  out << "\n";
  for (std::size_t i = 0; i < n; ++i) {
    out << pad(f.labels[i]);
    for (std::size_t j = 0; j < n; ++j) out << pad(cell[i * n + j]);
    out << "\n";
  }
  for (const auto& pc : f.pairs) {
    out << "  " << f.labels[pc.first] << " vs " << f.labels[pc.second] << ": "
        << (pc.certificate ? describe(*pc.certificate) : "uncertified pair") << "\n";
  }
  return out.str();
}

void write_family(const SiblingFamily& f, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto write = [&](const std::string& name, const std::string& text) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
    out << text;
  };
  write("base.tree", serialize(f.base));
  for (std::size_t i = 0; i < f.members.size(); ++i) write(f.labels[i] + ".tree", serialize(f.members[i]));
  write("manifest.json", family_manifest(f).dump(2) + "\n");
}

Json verdict_json(const Verdict& v) {
  Json j{{"outcome", std::string(to_string(v.outcome))},
         {"justification", std::string(citation(v.justification))},
         {"notes", v.notes},
         {"budget_used",
          Json{{"root_images_tried", v.budget_used.root_images_tried},
               {"witness_vertices", v.budget_used.witness_vertices},
               {"exhausted", v.budget_used.exhausted}}}};
  j["family"] = v.family ? family_manifest(*v.family) : Json(nullptr);
  return j;
}

std::string verdict_text(const Verdict& v) {
  std::string out = std::string(to_string(v.outcome)) + " (" + std::string(citation(v.justification)) + ")\n";
  if (v.family) {
    out += "evidence: " + v.family->construction + " family, " + std::to_string(v.family->members.size()) +
           " members, all pairs certified\n";
  } else {
    out += "evidence: none\n";
  }
  for (const auto& n : v.notes) out += "note: " + n + "\n";
  return out;
}

namespace {

Unfolding render_unfolding(const TreePresentation& p, const RenderOptions& options) {
  UnfoldOptions uo;
  uo.depth = options.depth;
  uo.omega_width = options.width;
  uo.max_vertices = options.max_vertices;
  return unfold(p, uo);
}

}  // namespace

std::string render_dot(const TreePresentation& p, const RenderOptions& options) {
  const Unfolding u = render_unfolding(p, options);
  const auto core = classify_core(p);
  std::ostringstream out;
  out << "digraph unfolding {\n  node [shape=circle];\n";
  for (Vertex v = 0; v < u.size(); ++v) {
    out << "  \"" << u.tree.tree.id(v) << "\" [label=\"" << p.name(u.at(v).state) << "\"";
    if (core.is_core(u.at(v).cls)) out << ", style=filled, fillcolor=lightblue";
    out << "];\n";
  }
  for (Vertex v = 0; v < u.size(); ++v) {
    for (Vertex c : u.at(v).children) out << "  \"" << u.tree.tree.id(v) << "\" -> \"" << u.tree.tree.id(c) << "\";\n";
  }
  out << "}\n";
  return out.str();
}

Json render_json(const TreePresentation& p, const RenderOptions& options) {
  const Unfolding u = render_unfolding(p, options);
  const auto core = classify_core(p);
  Json vertices = Json::array();
  for (Vertex v = 0; v < u.size(); ++v) {
    const auto& x = u.at(v);
    vertices.push_back(Json{{"id", u.tree.tree.id(v)},
                            {"state", p.name(x.state)},
                            {"depth", x.depth},
                            {"parent", x.parent ? Json(u.tree.tree.id(*x.parent)) : Json(nullptr)},
                            {"address", to_string(u.address(v))},
                            {"core", core.is_core(x.cls)}});
  }
  return Json{{"depth", options.depth}, {"width", options.width}, {"vertices", vertices}};
}

}  // namespace arbor
