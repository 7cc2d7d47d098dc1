#include "reparse/engine.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

namespace reparse {

namespace {

constexpr const char* kFallbackCategory = "N";
constexpr const char* kFallbackConcept = "GENERIC-THING";

std::string join(const std::vector<std::string>& items) {
  std::string out = "[";
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ',';
    out += items[i];
  }
  return out + "]";
}

std::optional<RoleId> role_of(const ParseState& s, MeaningId m) {
  for (const RoleNode& r : s.roles())
    if (r.filler == m) return r.id;
  return std::nullopt;
}

}  // namespace

const char* to_string(Status s) { return s == Status::Complete ? "complete" : "fragments"; }

std::string site_label(const SiteRef& site) {
  return std::to_string(site.parent) + "." + std::to_string(site.position);
}

std::vector<std::string> tokenize(std::string_view sentence) {
  auto punct = [](char c) {
    return c == '.' || c == ',' || c == ';' || c == ':' || c == '!' || c == '?' || c == '"' ||
           c == '\'' || c == '(' || c == ')';
  };
  std::vector<std::string> out;
  std::istringstream in{std::string(sentence)};
  std::string piece;
  while (in >> piece) {
    std::size_t b = 0, e = piece.size();
    while (b < e && punct(piece[b])) ++b;
    while (e > b && punct(piece[e - 1])) --e;
    if (b < e) out.push_back(piece.substr(b, e - b));
  }
  return out;
}

Session::Session(const KnowledgeBase& kb, EngineConfig config)
    : kb_(&kb), config_(std::move(config)), syntax_(kb), semantics_(kb), state_(kb) {
  if (!config_.lesioned(Lesion::Syntax)) {
    NodeId root = state_.make_phrasal(std::string(kSentenceCategory), 0);
    state_.fragments().push_back(root);
  }
}

void Session::emit(TraceKind kind, std::string line) {
  if (config_.trace_verbosity > 0) trace_.push_back({kind, token_, std::move(line)});
}

std::vector<NodeId> Session::construct(const std::vector<LexicalEntry>& entries) {
  // Entries sharing a sense share one meaning instance and role.
  std::map<std::string, std::pair<MeaningId, RoleId>> by_sense;
  std::vector<NodeId> leaves;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const LexicalEntry& e = entries[i];
    NodeId leaf = state_.make_leaf(e, token_, i);
    auto role = semantics_.primitive_role(e.category);
    if (!config_.lesioned(Lesion::Semantics) && role && e.sense != kNoSense) {
      auto it = by_sense.find(e.sense);
      if (it == by_sense.end()) {
        MeaningId m = state_.make_meaning(e.sense, token_);
        it = by_sense.emplace(e.sense, std::make_pair(m, state_.make_role(*role, m))).first;
      }
      state_.assign_semantics(leaf, it->second.first, it->second.second);
    }
    leaves.push_back(leaf);
  }
  return leaves;
}

void Session::step(std::string_view word) {
  std::string folded = fold_case(word);
  tokens_.push_back(folded);
  std::vector<LexicalEntry> entries;
  try {
    entries = kb_->lexical_access(folded, token_);
  } catch (const UnknownWordError&) {
    if (!config_.unknown_as_noun) throw;
    entries.push_back({folded, kFallbackCategory, "common", kFallbackConcept});
  }
  std::vector<std::string> listed;
  for (const LexicalEntry& e : entries)
    listed.push_back(e.category + "/" + e.subcategory + "/" + e.sense);
  emit(TraceKind::Access, "ACCESS w=" + folded + " entries=" + join(listed));

  std::vector<NodeId> leaves = construct(entries);
  if (!config_.lesioned(Lesion::Syntax)) {
    if (!attach_offers(leaves, false)) open_fallback(leaves.front());
    connect_fragments();
  }
  ++token_;
}

NodeId Session::target_for(const ParseState& s, bool connecting) const {
  const auto& f = s.fragments();
  if (f.empty() || (connecting && f.size() < 2))
    throw StructureError("no fragment to attach to");
  return connecting ? f[f.size() - 2] : f.back();
}

std::vector<AttachmentSite> Session::sites_for(const ParseState& s, NodeId offer,
                                               NodeId target) const {
  const ParseNode& n = s.node(offer);
  if (n.lexical() && !semantics_.primitive_role(n.category))
    return syntax_.open_candidates(s, offer);
  return syntax_.syntactic_candidates(s, target, offer);
}

std::vector<Candidate> Session::propose(const std::vector<NodeId>& offers, NodeId target) {
  std::vector<Candidate> out;
  for (std::size_t k = 0; k < offers.size(); ++k) {
    NodeId offer = offers[k];
    std::vector<std::pair<std::vector<Projection>, std::vector<NodeId>>> chains;
    std::vector<std::string> labels;
    for (AttachmentSite& site : sites_for(state_, offer, target)) {
      Candidate c;
      c.offer = k;
      c.base = offer;
      auto it = std::find_if(chains.begin(), chains.end(),
                             [&](const auto& p) { return p.first == site.creates; });
      if (it == chains.end()) {
        std::vector<NodeId> built;
        for (const Projection& p : site.creates) built.push_back(state_.make_phrasal(p.category, p.tmpl));
        chains.emplace_back(site.creates, std::move(built));
        it = std::prev(chains.end());
      }
      c.chain = it->second;
      switch (site.kind) {
        case SiteKind::Attach:
          c.ref = {SiteKind::Attach, site.parent, site.tmpl, site.position, std::nullopt};
          break;
        case SiteKind::Adjoin:
          c.wrapper = state_.make_phrasal(state_.node(site.parent).category, site.tmpl);
          c.ref = {SiteKind::Adjoin, *c.wrapper, site.tmpl, site.position, site.parent};
          break;
        case SiteKind::Open:
          c.ref = {SiteKind::Open, c.chain.back(), site.creates.back().tmpl,
                   site.creates.back().position, std::nullopt};
          break;
      }
      c.site = std::move(site);
      labels.push_back(site_label(c.ref));
      out.push_back(std::move(c));
    }
    emit(TraceKind::Propose, "PROPOSE node=" + std::to_string(offer) + " sites=" + join(labels));
  }
  return out;
}

void Session::evaluate(std::vector<Candidate>& candidates) const {
  bool any_expected = false;
  std::size_t fewest = static_cast<std::size_t>(-1);
  for (Candidate& c : candidates) {
    ParseState scratch = state_;
    Sink sink;
    commit(scratch, c, sink);
    PreferenceVector& p = c.preference;
    p.semantic = config_.semantics_cut() ? SemClass::Unknown : sink.worst;
    p.expectation_satisfied = syntax_.expectation_satisfied(c.site, state_);
    p.recency = c.site.depth_rank;
    if (!c.site.creates.empty())
      p.template_rank = static_cast<int>(c.site.creates.back().tmpl);
    else if (c.site.kind == SiteKind::Adjoin)
      p.template_rank = static_cast<int>(c.site.tmpl);
    else if (const ParseNode& b = state_.node(c.base); !b.lexical())
      p.template_rank = static_cast<int>(*b.tmpl);
    any_expected = any_expected || p.expectation_satisfied;
    fewest = std::min(fewest, c.site.created_count());
  }
  // Minimal attachment: with no obligatory expectation in play, the sites
  // that build the fewest nodes count as the expected ones.
  if (!any_expected)
    for (Candidate& c : candidates)
      c.preference.expectation_satisfied = c.site.created_count() == fewest;
}

std::size_t Session::select(const std::vector<Candidate>& candidates) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < candidates.size(); ++i)
    if (preferred(candidates[i].preference, candidates[best].preference)) best = i;
  const Candidate& chosen = candidates[best];

  std::vector<std::string> retained;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (i == best) continue;
    const Candidate& c = candidates[i];
    // A rejected structure over a different node is assembled now so that
    // recovery can place it without building anything.
    if (c.base != chosen.base) {
      try {
        NodeId prev = c.base;
        for (std::size_t k = 0; k < c.chain.size(); ++k) {
          if (state_.node(prev).parent != c.chain[k])
            state_.attach(prev, c.chain[k], c.site.creates[k].position);
          prev = c.chain[k];
        }
      } catch (const StructureError&) {
      }
    }
    Alternative alt;
    alt.child = c.top();
    alt.site = c.ref;
    alt.preference = c.preference;
    alt.status = c.preference.semantic == SemClass::Violation ? AltStatus::Violating
                                                               : AltStatus::Viable;
    alt.birth = token_;
    alt.displaced = chosen.top();
    if (auto id = state_.retain(alt, config_.capacity))
      retained.push_back(std::to_string(*id) + ":" + site_label(c.ref));
  }
  emit(TraceKind::Select, "SELECT site=" + site_label(chosen.ref) + " retained=" + join(retained));
  return best;
}

void Session::place(ParseState& s, NodeId node, const SiteRef& site) const {
  switch (site.kind) {
    case SiteKind::Attach:
      s.attach(node, site.parent, site.position);
      return;
    case SiteKind::Adjoin: {
      NodeId target = *site.adjoin_target;
      const ParseNode& tn = s.node(target);
      if (!tn.parent) throw StructureError("adjunction target is a root");
      NodeId grand = *tn.parent;
      std::size_t pos = tn.position;
      s.detach(target);
      s.attach(target, site.parent, 0);
      s.attach(site.parent, grand, pos);
      s.attach(node, site.parent, site.position);
      return;
    }
    case SiteKind::Open:
      throw StructureError("open sites cannot be re-entered");
  }
}

void Session::commit(ParseState& s, const Candidate& c, Sink& sink) const {
  NodeId prev = c.base;
  for (std::size_t k = 0; k < c.chain.size(); ++k) {
    if (s.node(prev).parent != c.chain[k]) s.attach(prev, c.chain[k], c.site.creates[k].position);
    prev = c.chain[k];
  }
  if (c.ref.kind == SiteKind::Open)
    s.fragments().push_back(prev);
  else
    place(s, prev, c.ref);
  const ParseNode& base = s.node(c.base);
  bind_from(s, base.parent ? *base.parent : c.base, sink);
}

void Session::bind_from(ParseState& s, NodeId from, Sink& sink) const {
  if (config_.semantics_cut()) return;
  for (std::optional<NodeId> cur = from; cur; cur = s.node(*cur).parent) {
    if (s.node(*cur).lexical()) continue;
    std::vector<NodeId> children = s.node(*cur).children;
    for (NodeId child : children) {
      if (s.is_head_child(child) || s.has_binding(*cur, child)) continue;
      auto ra = semantics_.role_assignment(s, *cur, child);
      if (!ra) continue;
      std::optional<RoleId> linked = s.head_role(child);
      if (linked) {
        const RoleNode& r = s.role(*linked);
        if (!ra->inverse && r.label != ra->label && kb_->can_specialize(r.label, ra->label))
          s.specialize_role(*linked, ra->label);
        s.role_mut(*linked).parent = s.head_role(*cur);
      }
      s.add_binding({ra->event, ra->label, ra->filler, *cur, child, ra->result, linked});
      sink.binds.push_back("BIND role=" + ra->label + " filler=" + s.meaning(ra->filler).tag +
                           " head=" + s.meaning(ra->event).tag);
      sink.worst = worst(sink.worst, ra->result);
      sink.any = true;
    }
  }
}

void Session::bind_at(NodeId from) {
  Sink sink;
  bind_from(state_, from, sink);
  for (std::string& line : sink.binds) emit(TraceKind::Bind, std::move(line));
}

bool Session::attach_offers(const std::vector<NodeId>& offers, bool connecting) {
  std::vector<Candidate> candidates = propose(offers, target_for(state_, connecting));
  if (candidates.empty()) {
    emit(TraceKind::Fail, "FAIL node=" + std::to_string(offers.front()) + " reason=no-site");
    if (!recover(offers, connecting)) {
      emit(TraceKind::Fail,
           "FAIL node=" + std::to_string(offers.front()) + " reason=recovery-exhausted");
      return false;
    }
    candidates = propose(offers, target_for(state_, connecting));
    if (candidates.empty()) return false;
  }
  evaluate(candidates);
  for (const Candidate& c : candidates) {
    const PreferenceVector& p = c.preference;
    emit(TraceKind::Evaluate, "EVALUATE site=" + site_label(c.ref) + " sem=" +
                                  to_string(p.semantic) +
                                  " exp=" + (p.expectation_satisfied ? "1" : "0") +
                                  " rec=" + std::to_string(p.recency) +
                                  " tmpl=" + std::to_string(p.template_rank));
  }
  std::size_t best = select(candidates);
  Sink sink;
  commit(state_, candidates[best], sink);
  for (std::string& line : sink.binds) emit(TraceKind::Bind, std::move(line));
  return true;
}

void Session::connect_fragments() {
  while (state_.fragments().size() >= 2) {
    NodeId root = state_.fragments().back();
    if (!state_.subtree_complete(root)) break;
    if (!attach_offers({root}, true)) break;
  }
}

void Session::open_fallback(NodeId leaf) {
  auto opens = syntax_.open_candidates(state_, leaf);
  if (opens.empty()) {
    state_.fragments().push_back(leaf);
    return;
  }
  NodeId prev = leaf;
  for (const Projection& p : opens.front().creates) {
    NodeId up = state_.make_phrasal(p.category, p.tmpl);
    state_.attach(prev, up, p.position);
    prev = up;
  }
  state_.fragments().push_back(prev);
  bind_at(*state_.node(leaf).parent);
}

void Session::repair(ParseState& s, const Alternative& alt, Sink& sink) const {
  NodeId displaced = alt.displaced;
  const ParseNode& dn = s.node(displaced);
  if (!dn.parent) throw StructureError("displaced structure is not attached");
  NodeId parent = *dn.parent;
  const ParseNode& pn = s.node(parent);

  // Undo the chosen attachment, dissolving an adjunction made for it.
  if (s.template_of(parent).is_adjunction(pn.category) && dn.position > 0 &&
      pn.children.size() == 2 && pn.parent) {
    NodeId wrapped = pn.children.front();
    NodeId grand = *pn.parent;
    std::size_t pos = pn.position;
    s.detach(displaced);
    s.detach(wrapped);
    s.detach(parent);
    s.attach(wrapped, grand, pos);
    bind_from(s, grand, sink);
  } else {
    s.detach(displaced);
  }

  if (alt.child == displaced) {
    place(s, displaced, alt.site);
    bind_from(s, *s.node(displaced).parent, sink);
    return;
  }

  // A different structure replaces the displaced one; whatever attached to
  // the displaced node after the decision moves over intact.
  std::vector<NodeId> later;
  for (NodeId c : s.node(displaced).children)
    if (s.node(c).span.start > alt.birth) later.push_back(c);
  for (auto it = later.rbegin(); it != later.rend(); ++it) s.detach(*it);

  place(s, alt.child, alt.site);
  const Template& t = s.template_of(alt.child);
  for (NodeId c : later) {
    auto last = s.last_filled(alt.child);
    bool placed = false;
    for (std::size_t p = last ? *last + 1 : 0; p < t.elements.size(); ++p) {
      const TemplateElement& el = t.elements[p];
      if (el.category == s.node(c).category && syntax_.check_features(el, s.node(c))) {
        s.attach(c, alt.child, p);
        placed = true;
        break;
      }
      if (!el.optional) break;
    }
    if (!placed) throw StructureError("dependent cannot move to the alternative structure");
  }
  bind_from(s, alt.child, sink);
}

bool Session::recover(const std::vector<NodeId>& offers, bool connecting) {
  Counters before = state_.counters();
  while (auto alt = state_.reactivate([](const Alternative&) { return true; })) {
    ParseState scratch = state_;
    Sink sink;
    bool ok = false;
    try {
      repair(scratch, *alt, sink);
      NodeId target = target_for(scratch, connecting);
      for (NodeId offer : offers)
        if (!sites_for(scratch, offer, target).empty()) ok = true;
    } catch (const StructureError&) {
      ok = false;
    }
    if (!ok) continue;
    ++scratch.counters().recoveries;
    state_ = std::move(scratch);
    emit(TraceKind::Recover, "RECOVER alt=" + std::to_string(alt->id) +
                                 " detach=" + std::to_string(alt->displaced) +
                                 " reattach=" + site_label(alt->site));
    for (std::string& line : sink.binds) emit(TraceKind::Bind, std::move(line));
    recoveries_.push_back({token_, alt->id, before, state_.counters()});
    return true;
  }
  return false;
}

void Session::apply_semantic_fragments() {
  for (const RoleFragment& f : semantics_.semantic_fragments(state_)) {
    fragment_meanings_.push_back(f.root);
    for (const auto& p : f.participants) fragment_meanings_.push_back(p.second);
    auto head_role = role_of(state_, f.root);
    for (const auto& [label, filler] : f.participants) {
      auto r = role_of(state_, filler);
      if (r) {
        if (state_.role(*r).label != label && kb_->can_specialize(state_.role(*r).label, label))
          state_.specialize_role(*r, label);
        state_.role_mut(*r).parent = head_role;
      }
      SemClass result = semantics_.selectional_check(state_, f.root, label, filler);
      state_.add_binding({f.root, label, filler, kNoNode, kNoNode, result, r});
      emit(TraceKind::Bind, "BIND role=" + label + " filler=" + state_.meaning(filler).tag +
                                " head=" + state_.meaning(f.root).tag);
    }
  }
}

Interpretation Session::finish() {
  if (config_.lesioned(Lesion::Syntax)) apply_semantic_fragments();

  Interpretation out(state_);
  out.tokens = tokens_;
  const auto& frags = state_.fragments();
  if (frags.size() == 1) {
    const ParseNode& root = state_.node(frags.front());
    if (root.category == kSentenceCategory && state_.subtree_complete(root.id) &&
        root.span == Span{0, tokens_.size()}) {
      out.status = Status::Complete;
      out.parse_roots = {root.id};
      out.sentence_meaning = state_.head_meaning(root.id);
    }
  }
  if (out.status == Status::Fragments) {
    auto collect = [&](auto&& self, NodeId n) -> void {
      if (state_.subtree_complete(n) && !state_.node(n).span.empty()) {
        out.parse_roots.push_back(n);
        return;
      }
      for (NodeId c : state_.node(n).children) self(self, c);
    };
    for (NodeId f : frags) collect(collect, f);
  }

  std::vector<bool> live(state_.meanings().size(), false);
  for (MeaningId m : fragment_meanings_) live[m] = true;
  for (NodeId r : out.parse_roots)
    for (NodeId n : state_.subtree(r))
      if (auto m = state_.node(n).meaning) live[*m] = true;
  std::vector<bool> filler(state_.meanings().size(), false);
  for (const Binding& b : state_.bindings()) filler[b.filler] = true;
  for (MeaningId m = 0; m < live.size(); ++m)
    if (live[m] && !filler[m]) out.meaning_roots.push_back(m);
  std::stable_partition(out.meaning_roots.begin(), out.meaning_roots.end(),
                        [&](MeaningId m) { return m == out.sentence_meaning; });
  for (const RoleNode& r : state_.roles())
    if (live[r.filler] && !r.parent) out.role_roots.push_back(r.id);

  out.counters = state_.counters();
  out.trace = trace_;
  out.recoveries = recoveries_;
  return out;
}

Interpretation Engine::process_sentence(const std::vector<std::string>& tokens) const {
  if (tokens.empty()) throw EmptyInputError();
  Session session(*kb_, config_);
  for (const std::string& t : tokens) session.step(t);
  return session.finish();
}

}  // namespace reparse
