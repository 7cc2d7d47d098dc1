#include "reparse/structures.hpp"

#include <algorithm>

namespace reparse {

const char* to_string(SemClass c) {
  switch (c) {
    case SemClass::Ok: return "OK";
    case SemClass::Unknown: return "UNKNOWN";
    case SemClass::Violation: return "VIOLATION";
  }
  return "?";
}

SemClass worst(SemClass a, SemClass b) {
  return static_cast<int>(a) >= static_cast<int>(b) ? a : b;
}

bool preferred(const PreferenceVector& a, const PreferenceVector& b) {
  if (a.semantic != b.semantic) return static_cast<int>(a.semantic) < static_cast<int>(b.semantic);
  if (a.expectation_satisfied != b.expectation_satisfied) return a.expectation_satisfied;
  if (a.recency != b.recency) return a.recency < b.recency;
  return a.template_rank < b.template_rank;
}

ParseState::ParseState(const KnowledgeBase& kb) : kb_(&kb) {}

ParseNode& ParseState::mut(NodeId id) {
  if (id >= nodes_.size()) throw StructureError("no parse node " + std::to_string(id));
  return nodes_[id];
}

const ParseNode& ParseState::node(NodeId id) const {
  if (id >= nodes_.size()) throw StructureError("no parse node " + std::to_string(id));
  return nodes_[id];
}

const RoleNode& ParseState::role(RoleId id) const { return roles_.at(id); }
RoleNode& ParseState::role_mut(RoleId id) { return roles_.at(id); }
const MeaningInstance& ParseState::meaning(MeaningId id) const { return meanings_.at(id); }

NodeId ParseState::make_phrasal(const std::string& category, std::size_t tmpl) {
  const CategoryNode& cat = kb_->category(category);
  if (tmpl >= cat.templates.size())
    throw StructureError("category " + category + " has no template " + std::to_string(tmpl));
  ParseNode n;
  n.id = nodes_.size();
  n.category = category;
  n.tmpl = tmpl;
  nodes_.push_back(std::move(n));
  ++counters_.node_constructions;
  return nodes_.back().id;
}

NodeId ParseState::make_leaf(const LexicalEntry& entry, std::size_t token,
                             std::size_t entry_index) {
  ParseNode n;
  n.id = nodes_.size();
  n.category = entry.category;
  n.features = entry.subcategory;
  n.sense = entry.sense;
  n.token = token;
  n.entry = entry_index;
  n.span = {token, token + 1};
  nodes_.push_back(std::move(n));
  ++counters_.node_constructions;
  return nodes_.back().id;
}

NodeId ParseState::clone_leaf(NodeId leaf) {
  ParseNode n = node(leaf);
  if (!n.lexical()) throw StructureError("only lexical nodes can be cloned");
  n.id = nodes_.size();
  n.parent.reset();
  n.position = 0;
  nodes_.push_back(std::move(n));
  ++counters_.node_constructions;
  return nodes_.back().id;
}

MeaningId ParseState::make_meaning(const std::string& concept_name, std::size_t token) {
  kb_->concept_node(concept_name);
  auto it = std::find_if(ordinals_.begin(), ordinals_.end(),
                         [&](const auto& p) { return p.first == concept_name; });
  if (it == ordinals_.end()) {
    ordinals_.emplace_back(concept_name, 0);
    it = std::prev(ordinals_.end());
  }
  MeaningInstance m;
  m.id = meanings_.size();
  m.concept_name = concept_name;
  m.tag = concept_name + std::to_string(++it->second);
  m.token = token;
  meanings_.push_back(std::move(m));
  return meanings_.back().id;
}

RoleId ParseState::make_role(const std::string& label, MeaningId filler) {
  if (!kb_->has_role_label(label)) throw StructureError("unknown role label " + label);
  RoleNode r;
  r.id = roles_.size();
  r.label = label;
  r.filler = filler;
  roles_.push_back(std::move(r));
  return roles_.back().id;
}

void ParseState::assign_semantics(NodeId leaf, std::optional<MeaningId> meaning,
                                  std::optional<RoleId> role) {
  ParseNode& n = mut(leaf);
  if (!n.lexical()) throw StructureError("semantics attach to lexical nodes only");
  n.meaning = meaning;
  n.role = role;
}

const Template& ParseState::template_of(NodeId id) const {
  const ParseNode& n = node(id);
  if (n.lexical()) throw StructureError(n.category + " node " + std::to_string(id) + " is lexical");
  return kb_->category(n.category).templates[*n.tmpl];
}

std::optional<std::size_t> ParseState::last_filled(NodeId id) const {
  const ParseNode& n = node(id);
  if (n.children.empty()) return std::nullopt;
  return node(n.children.back()).position;
}

std::optional<NodeId> ParseState::child_at(NodeId id, std::size_t position) const {
  for (NodeId c : node(id).children)
    if (node(c).position == position) return c;
  return std::nullopt;
}

bool ParseState::complete(NodeId id) const {
  if (node(id).lexical()) return true;
  const Template& t = template_of(id);
  for (std::size_t p = 0; p < t.elements.size(); ++p)
    if (!t.elements[p].optional && !child_at(id, p)) return false;
  return true;
}

bool ParseState::subtree_complete(NodeId id) const {
  if (!complete(id)) return false;
  for (NodeId c : node(id).children)
    if (!subtree_complete(c)) return false;
  return true;
}

std::optional<MeaningId> ParseState::head_meaning(NodeId id) const {
  const ParseNode& n = node(id);
  if (n.lexical()) return n.meaning;
  auto head = child_at(id, template_of(id).head);
  if (!head) return std::nullopt;
  return head_meaning(*head);
}

std::optional<RoleId> ParseState::head_role(NodeId id) const {
  const ParseNode& n = node(id);
  if (n.lexical()) return n.role;
  auto head = child_at(id, template_of(id).head);
  if (!head) return std::nullopt;
  return head_role(*head);
}

bool ParseState::is_head_child(NodeId id) const {
  const ParseNode& n = node(id);
  return n.parent && template_of(*n.parent).head == n.position;
}

bool ParseState::has_binding(NodeId site, NodeId child) const {
  return std::any_of(bindings_.begin(), bindings_.end(),
                     [&](const Binding& b) { return b.site == site && b.child == child; });
}

std::vector<NodeId> ParseState::right_frontier(NodeId root) const {
  std::vector<NodeId> chain{root};
  while (!node(chain.back()).children.empty()) chain.push_back(node(chain.back()).children.back());
  return chain;
}

std::vector<NodeId> ParseState::subtree(NodeId root) const {
  std::vector<NodeId> out{root};
  for (std::size_t i = 0; i < out.size(); ++i)
    for (NodeId c : node(out[i]).children) out.push_back(c);
  return out;
}

NodeId ParseState::root_of(NodeId id) const {
  while (node(id).parent) id = *node(id).parent;
  return id;
}

void ParseState::refresh_spans(NodeId from) {
  std::optional<NodeId> cur = from;
  while (cur) {
    ParseNode& n = mut(*cur);
    if (!n.lexical()) {
      if (n.children.empty())
        n.span.end = n.span.start;
      else
        n.span = {node(n.children.front()).span.start, node(n.children.back()).span.end};
    }
    cur = n.parent;
  }
}

void ParseState::attach(NodeId child, NodeId parent, std::size_t position) {
  if (child == parent) throw StructureError("cannot attach a node under itself");
  const ParseNode& c = node(child);
  const ParseNode& p = node(parent);
  if (c.parent) throw StructureError("node " + std::to_string(child) + " is already attached");
  if (p.lexical()) throw StructureError("cannot attach under lexical node " + p.category);
  if (c.span.empty()) throw StructureError("cannot attach an empty subtree");
  const Template& t = template_of(parent);
  if (position >= t.elements.size())
    throw StructureError("position " + std::to_string(position) + " out of range for " +
                         p.category);
  auto last = last_filled(parent);
  std::size_t first_open = last ? *last + 1 : 0;
  if (position < first_open) throw StructureError("position already filled or passed");
  for (std::size_t q = first_open; q < position; ++q)
    if (!t.elements[q].optional)
      throw StructureError("attachment skips obligatory " + t.elements[q].category);
  const TemplateElement& el = t.elements[position];
  if (el.category != c.category)
    throw StructureError("category mismatch: " + p.category + " position " +
                         std::to_string(position) + " expects " + el.category + ", got " +
                         c.category);
  if (el.subcategory && (!c.lexical() || c.features != *el.subcategory))
    throw StructureError("feature mismatch: expected " + *el.subcategory + ", got " +
                         (c.features.empty() ? std::string("none") : c.features));
  for (std::optional<NodeId> a = parent; a; a = node(*a).parent) {
    if (*a == child) throw StructureError("attachment would create a cycle");
    const ParseNode& an = node(*a);
    if (an.parent && node(*an.parent).children.back() != *a)
      throw StructureError("site is not on the right frontier");
  }
  for (std::optional<NodeId> a = parent; a; a = node(*a).parent) {
    const ParseNode& an = node(*a);
    if (!an.span.empty()) {
      if (an.span.end != c.span.start) throw StructureError("span discontiguity");
      break;
    }
  }

  ParseNode& pm = mut(parent);
  if (pm.children.empty()) pm.span = {c.span.start, c.span.start};
  pm.children.push_back(child);
  ParseNode& cm = mut(child);
  cm.parent = parent;
  cm.position = position;
  refresh_spans(parent);
  std::erase(fragments_, child);
  ++counters_.attachments;
}

void ParseState::detach(NodeId id) {
  const ParseNode& n = node(id);
  if (!n.parent) throw StructureError("cannot detach root node " + std::to_string(id));
  for (NodeId a = id; node(a).parent; a = *node(a).parent)
    if (node(*node(a).parent).children.back() != a)
      throw StructureError("detach would break span contiguity");
  NodeId parent = *n.parent;
  drop_bindings(parent, id);
  ParseNode& pm = mut(parent);
  pm.children.pop_back();
  ParseNode& nm = mut(id);
  nm.parent.reset();
  nm.position = 0;
  refresh_spans(parent);
  ++counters_.detachments;
}

void ParseState::drop_bindings(NodeId site, NodeId child) {
  bool head = is_head_child(child);
  auto doomed = [&](const Binding& b) { return b.site == site && (head || b.child == child); };
  for (const Binding& b : bindings_) {
    if (!doomed(b)) continue;
    MeaningInstance& m = meanings_.at(b.head);
    auto it = std::find(m.bindings.begin(), m.bindings.end(), std::make_pair(b.role, b.filler));
    if (it != m.bindings.end()) m.bindings.erase(it);
    if (b.result == SemClass::Violation) {
      auto v = std::find(m.violations.begin(), m.violations.end(), b.role);
      if (v != m.violations.end()) m.violations.erase(v);
    }
    if (b.linked_role) roles_.at(*b.linked_role).parent.reset();
  }
  std::erase_if(bindings_, doomed);
  // A head child carried the site's meaning upward; links made with that
  // meaning above the site are gone too.
  if (head && node(site).parent) drop_bindings(*node(site).parent, site);
}

void ParseState::add_binding(Binding b) {
  MeaningInstance& m = meanings_.at(b.head);
  m.bindings.emplace_back(b.role, b.filler);
  if (b.result == SemClass::Violation) m.violations.push_back(b.role);
  bindings_.push_back(std::move(b));
}

void ParseState::specialize_role(RoleId id, const std::string& target) {
  RoleNode& r = roles_.at(id);
  if (!kb_->can_specialize(r.label, target))
    throw StructureError("illegal role specialization " + r.label + " -> " + target);
  r.history.push_back(r.label);
  r.label = target;
}

std::size_t ParseState::store_size() const {
  return static_cast<std::size_t>(
      std::count_if(alternatives_.begin(), alternatives_.end(),
                    [](const Alternative& a) { return a.status != AltStatus::Consumed; }));
}

std::optional<AltId> ParseState::retain(Alternative alt, std::optional<std::size_t> capacity) {
  alt.id = next_alt_++;
  AltId id = alt.id;
  alternatives_.push_back(std::move(alt));
  if (capacity) prune(*capacity);
  counters_.retained_peak = std::max(counters_.retained_peak, store_size());
  bool kept = std::any_of(alternatives_.begin(), alternatives_.end(),
                          [&](const Alternative& a) { return a.id == id; });
  return kept ? std::optional<AltId>(id) : std::nullopt;
}

void ParseState::prune(std::size_t capacity) {
  while (store_size() > capacity) {
    auto oldest = std::find_if(alternatives_.begin(), alternatives_.end(),
                               [](const Alternative& a) { return a.status != AltStatus::Consumed; });
    alternatives_.erase(oldest);
  }
}

std::optional<Alternative> ParseState::reactivate(
    const std::function<bool(const Alternative&)>& pred) {
  for (AltStatus wanted : {AltStatus::Viable, AltStatus::Violating}) {
    for (auto it = alternatives_.rbegin(); it != alternatives_.rend(); ++it) {
      if (it->status == wanted && pred(*it)) {
        Alternative out = *it;
        it->status = AltStatus::Consumed;
        return out;
      }
    }
  }
  return std::nullopt;
}

void ParseState::check_well_formed() const {
  for (const ParseNode& n : nodes_) {
    std::size_t steps = 0;
    for (std::optional<NodeId> a = n.parent; a; a = node(*a).parent)
      if (++steps > nodes_.size()) throw StructureError("cycle in parent links");
    if (n.parent) {
      const auto& siblings = node(*n.parent).children;
      if (std::count(siblings.begin(), siblings.end(), n.id) != 1)
        throw StructureError("parent/child link mismatch at node " + std::to_string(n.id));
    }
    if (n.lexical()) {
      if (!n.children.empty()) throw StructureError("lexical node with children");
      continue;
    }
    std::optional<std::size_t> prev_pos;
    std::optional<std::size_t> prev_end;
    for (NodeId c : n.children) {
      const ParseNode& cn = node(c);
      if (cn.parent != n.id) throw StructureError("child does not point back to parent");
      if (prev_pos && cn.position <= *prev_pos) throw StructureError("children out of order");
      if (prev_end && cn.span.start != *prev_end) throw StructureError("children not contiguous");
      prev_pos = cn.position;
      prev_end = cn.span.end;
    }
    if (!n.children.empty()) {
      Span want{node(n.children.front()).span.start, node(n.children.back()).span.end};
      if (!(n.span == want)) throw StructureError("span does not cover children");
    }
  }
}

}  // namespace reparse
