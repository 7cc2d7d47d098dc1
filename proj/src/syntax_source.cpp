#include "reparse/syntax_source.hpp"

namespace reparse {

namespace {

struct Reach {
  std::string category;
  bool lexical = false;
  std::string features;
  std::vector<Projection> chain;
};

bool accepts(const TemplateElement& el, const Reach& r) {
  if (el.category != r.category) return false;
  return !el.subcategory || (r.lexical && r.features == *el.subcategory);
}

bool left_corner(const Template& t, std::size_t q) {
  for (std::size_t p = 0; p < q; ++p)
    if (!t.elements[p].optional) return false;
  return true;
}

// Everything reachable one projection above `r`. Adjunction templates are
// left out: wrapping a phrase before its modifier arrives is gratuitous.
std::vector<Reach> lift(const KnowledgeBase& kb, const Reach& r) {
  std::vector<Reach> out;
  for (const CategoryNode& c : kb.categories()) {
    for (std::size_t t = 0; t < c.templates.size(); ++t) {
      const Template& tmpl = c.templates[t];
      if (tmpl.is_adjunction(c.name)) continue;
      for (std::size_t q = 0; q < tmpl.elements.size() && left_corner(tmpl, q); ++q) {
        if (!accepts(tmpl.elements[q], r)) continue;
        Reach up{c.name, false, {}, r.chain};
        up.chain.push_back({c.name, t, q});
        out.push_back(std::move(up));
      }
    }
  }
  return out;
}

}  // namespace

bool SyntaxSource::check_features(const TemplateElement& element, const ParseNode& node) const {
  if (!element.subcategory) return true;
  return node.lexical() && node.features == *element.subcategory;
}

std::vector<std::vector<Projection>> SyntaxSource::projection_chains(
    const ParseNode& node, const TemplateElement& target) const {
  std::vector<Reach> level{{node.category, node.lexical(), node.features, {}}};
  for (std::size_t depth = 0; depth <= kMaxProjection && !level.empty(); ++depth) {
    std::vector<std::vector<Projection>> found;
    for (const Reach& r : level)
      if (accepts(target, r)) found.push_back(r.chain);
    if (!found.empty()) return found;
    if (depth == kMaxProjection) break;
    std::vector<Reach> next;
    for (const Reach& r : level)
      for (Reach& up : lift(*kb_, r)) next.push_back(std::move(up));
    level = std::move(next);
  }
  return {};
}

std::vector<AttachmentSite> SyntaxSource::syntactic_candidates(const ParseState& state,
                                                               NodeId frontier_root,
                                                               NodeId node_id) const {
  const ParseNode& node = state.node(node_id);
  std::vector<AttachmentSite> out;
  std::vector<NodeId> frontier = state.right_frontier(frontier_root);
  const int n = static_cast<int>(frontier.size());

  // below_complete[i]: every frontier node under frontier[i] is complete,
  // so attaching to the right of them closes nothing unfinished.
  std::vector<bool> below_complete(frontier.size(), true);
  for (int i = n - 2; i >= 0; --i)
    below_complete[i] = below_complete[i + 1] && state.complete(frontier[i + 1]);

  auto add_positions = [&](SiteKind kind, NodeId parent, std::size_t tmpl_index,
                           const Template& tmpl, std::size_t first, int rank) {
    for (std::size_t p = first; p < tmpl.elements.size(); ++p) {
      const TemplateElement& el = tmpl.elements[p];
      for (auto& chain : projection_chains(node, el))
        out.push_back({kind, parent, tmpl_index, p, std::move(chain), rank});
      if (!el.optional) break;
    }
  };

  for (int i = 0; i < n; ++i) {
    NodeId x = frontier[i];
    const ParseNode& xn = state.node(x);
    if (!below_complete[i] || xn.lexical()) continue;
    int rank = n - 1 - i;
    auto last = state.last_filled(x);
    add_positions(SiteKind::Attach, x, *xn.tmpl, state.template_of(x), last ? *last + 1 : 0, rank);

    if (!xn.parent || !state.complete(x)) continue;
    const CategoryNode& cat = kb_->category(xn.category);
    for (std::size_t t = 0; t < cat.templates.size(); ++t)
      if (cat.templates[t].is_adjunction(cat.name))
        add_positions(SiteKind::Adjoin, x, t, cat.templates[t], 1, rank);
  }
  return out;
}

std::vector<AttachmentSite> SyntaxSource::open_candidates(const ParseState& state,
                                                          NodeId node_id) const {
  const ParseNode& node = state.node(node_id);
  std::vector<AttachmentSite> out;
  for (Reach& up : lift(*kb_, {node.category, node.lexical(), node.features, {}})) {
    const Projection& top = up.chain.back();
    out.push_back({SiteKind::Open, node_id, top.tmpl, top.position, std::move(up.chain), 0});
  }
  return out;
}

bool SyntaxSource::expectation_satisfied(const AttachmentSite& site,
                                         const ParseState& state) const {
  if (site.kind != SiteKind::Attach) return false;
  return !state.template_of(site.parent).elements[site.position].optional;
}

}  // namespace reparse
