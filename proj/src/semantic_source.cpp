#include "reparse/semantic_source.hpp"

#include <algorithm>

namespace reparse {

namespace {

constexpr const char* kEventRole = "EVENT";

std::optional<std::string> leftmost_sense(const ParseState& state, NodeId id) {
  const ParseNode* n = &state.node(id);
  while (!n->lexical()) {
    if (n->children.empty()) return std::nullopt;
    n = &state.node(n->children.front());
  }
  return n->sense;
}

}  // namespace

std::optional<std::string> SemanticSource::primitive_role(const std::string& category) const {
  return kb_->primitive_role(category);
}

SemClass SemanticSource::selectional_check(const std::string& event_concept,
                                           const std::string& slot,
                                           const std::string& filler_concept) const {
  auto restriction = kb_->slot_restriction(event_concept, slot);
  if (!restriction) return SemClass::Unknown;
  return kb_->isa_subsumes(filler_concept, *restriction) ? SemClass::Ok : SemClass::Violation;
}

SemClass SemanticSource::selectional_check(const ParseState& state, MeaningId event,
                                           const std::string& slot, MeaningId filler) const {
  return selectional_check(state.meaning(event).concept_name, slot,
                           state.meaning(filler).concept_name);
}

std::optional<RoleAssignment> SemanticSource::role_assignment(const ParseState& state,
                                                              NodeId site, NodeId child) const {
  const ParseNode& c = state.node(child);
  const TemplateElement& el = state.template_of(site).elements.at(c.position);
  if (!el.role) return std::nullopt;
  auto head = state.head_meaning(site);
  auto carried = state.head_meaning(child);
  if (!head || !carried) return std::nullopt;

  std::string label = *el.role;
  if (label == kPrepositionRole) {
    auto sense = leftmost_sense(state, child);
    if (!sense) return std::nullopt;
    auto mapped = kb_->preposition_role(*sense, state.node(site).category);
    if (!mapped) return std::nullopt;
    label = *mapped;
  }
  RoleAssignment ra;
  ra.label = label;
  ra.inverse = el.inverse;
  ra.event = el.inverse ? *carried : *head;
  ra.filler = el.inverse ? *head : *carried;
  ra.result = selectional_check(state, ra.event, ra.label, ra.filler);
  return ra;
}

std::vector<RoleFragment> SemanticSource::semantic_fragments(const ParseState& state) const {
  const auto& meanings = state.meanings();
  std::vector<bool> is_event(meanings.size(), false);
  for (const RoleNode& r : state.roles())
    if (r.label == kEventRole) is_event[r.filler] = true;

  std::vector<MeaningId> order(meanings.size());
  for (MeaningId i = 0; i < meanings.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](MeaningId a, MeaningId b) {
    return meanings[a].token < meanings[b].token;
  });

  std::vector<bool> used(meanings.size(), false);
  auto admits = [&](MeaningId event, const char* slot, MeaningId m) {
    return selectional_check(state, event, slot, m) == SemClass::Ok;
  };

  std::vector<RoleFragment> out;
  for (MeaningId e : order) {
    if (!is_event[e]) continue;
    if (used[e]) continue;
    std::size_t event_token = meanings[e].token;
    // The event claims its word; other senses of it drop out.
    for (MeaningId m : order)
      if (meanings[m].token == event_token) used[m] = true;
    RoleFragment f{e, {}};
    for (MeaningId m : order) {
      if (used[m] || is_event[m] || meanings[m].token == event_token) continue;
      if (admits(e, "ACTOR", m)) {
        f.participants.emplace_back("ACTOR", m);
        used[m] = true;
        break;
      }
    }
    for (MeaningId m : order) {
      if (used[m] || is_event[m] || meanings[m].token <= event_token) continue;
      if (admits(e, "OBJECT", m)) {
        f.participants.emplace_back("OBJECT", m);
        used[m] = true;
        break;
      }
    }
    out.push_back(std::move(f));
  }
  for (MeaningId m : order)
    if (!used[m]) out.push_back({m, {}});
  std::stable_sort(out.begin(), out.end(), [&](const RoleFragment& a, const RoleFragment& b) {
    return meanings[a.root].token < meanings[b.root].token;
  });
  return out;
}

}  // namespace reparse
