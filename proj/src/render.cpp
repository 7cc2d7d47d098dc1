#include "reparse/render.hpp"

#include <algorithm>
#include <set>

namespace reparse {

namespace {

bool flat(const ParseState& s, const ParseNode& n) {
  return std::all_of(n.children.begin(), n.children.end(),
                     [&](NodeId c) { return s.node(c).lexical(); });
}

void tree_lines(const Interpretation& in, NodeId id, std::size_t indent, std::string& out) {
  const ParseState& s = in.state;
  const ParseNode& n = s.node(id);
  if (n.lexical()) {
    out += "(" + n.category + " " + in.tokens.at(*n.token) + ")";
    return;
  }
  out += "(" + n.category;
  bool broken = false;
  for (NodeId c : n.children) {
    const ParseNode& child = s.node(c);
    if (!broken && (child.lexical() || flat(s, n))) {
      out += " ";
    } else {
      broken = true;
      out += "\n" + std::string(indent + 2, ' ');
    }
    tree_lines(in, c, indent + 2, out);
  }
  out += ")";
}

std::string tagged(const MeaningInstance& m) { return m.tag + ":" + m.concept_name; }

void meaning_lines(const ParseState& s, MeaningId id, std::size_t indent,
                   std::set<MeaningId>& seen, std::string& out) {
  if (!seen.insert(id).second) return;
  const MeaningInstance& m = s.meaning(id);
  out += std::string(indent, ' ') + tagged(m);
  for (const auto& [role, filler] : m.bindings) {
    out += " " + role + "=" + tagged(s.meaning(filler));
    if (std::count(m.violations.begin(), m.violations.end(), role)) out += "!";
  }
  out += "\n";
  for (const auto& [role, filler] : m.bindings)
    if (!s.meaning(filler).bindings.empty()) meaning_lines(s, filler, indent + 2, seen, out);
}

void role_lines(const ParseState& s, RoleId id, std::size_t indent, std::string& out) {
  const RoleNode& r = s.role(id);
  out += std::string(indent, ' ') + r.label + " " + s.meaning(r.filler).tag + "\n";
  for (const RoleNode& c : s.roles())
    if (c.parent == id) role_lines(s, c.id, indent + 2, out);
}

}  // namespace

std::string render_tree(const Interpretation& interp) {
  std::string out;
  for (NodeId root : interp.parse_roots) {
    tree_lines(interp, root, 0, out);
    out += "\n";
  }
  return out;
}

std::string render_roles(const Interpretation& interp) {
  std::string out;
  for (RoleId r : interp.role_roots) role_lines(interp.state, r, 0, out);
  return out;
}

std::string render_meaning(const Interpretation& interp) {
  std::string out;
  std::set<MeaningId> seen;
  for (MeaningId m : interp.meaning_roots) meaning_lines(interp.state, m, 0, seen, out);
  return out;
}

std::string render_all(const Interpretation& interp) {
  return std::string("status: ") + to_string(interp.status) + "\n" + "tree:\n" +
         render_tree(interp) + "roles:\n" + render_roles(interp) + "meaning:\n" +
         render_meaning(interp);
}

}  // namespace reparse
