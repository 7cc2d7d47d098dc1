#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "reparse/kb.hpp"

namespace reparse {

using NodeId = std::size_t;
using RoleId = std::size_t;
using MeaningId = std::size_t;
using AltId = std::size_t;

/// Half-open token interval [start, end).
struct Span {
  std::size_t start = 0;
  std::size_t end = 0;

  bool empty() const { return start == end; }
  bool operator==(const Span&) const = default;
};

struct ParseNode {
  NodeId id = 0;
  std::string category;
  std::optional<std::size_t> tmpl;  // set for phrasal nodes
  std::string features;             // subcategory tag of a lexical node
  Span span;
  std::vector<NodeId> children;
  std::optional<NodeId> parent;
  std::size_t position = 0;  // template position within the parent

  // Lexical nodes only.
  std::optional<std::size_t> token;
  std::optional<std::size_t> entry;  // index into the word's access list
  std::string sense;
  std::optional<MeaningId> meaning;
  std::optional<RoleId> role;

  bool lexical() const { return !tmpl.has_value(); }
};

enum class SemClass { Ok, Unknown, Violation };

const char* to_string(SemClass c);
SemClass worst(SemClass a, SemClass b);

struct RoleNode {
  RoleId id = 0;
  std::string label;
  MeaningId filler = 0;
  std::optional<RoleId> parent;
  std::vector<std::string> history;  // prior labels, oldest first
};

struct MeaningInstance {
  MeaningId id = 0;
  std::string concept_name;
  std::string tag;  // concept name + per-parse ordinal, e.g. SEE1
  std::size_t token = 0;
  std::vector<std::pair<std::string, MeaningId>> bindings;  // role -> filler
  std::vector<std::string> violations;                      // roles bound despite a violation
};

/// One semantic connection made at a parse node between the head meaning
/// there and the meaning carried up by one of its children.
struct Binding {
  MeaningId head = 0;  // the event/head side that owns the slot
  std::string role;
  MeaningId filler = 0;
  NodeId site = 0;   // parse node where the meanings met
  NodeId child = 0;  // child of `site` whose attachment produced the binding
  SemClass result = SemClass::Ok;
  std::optional<RoleId> linked_role;  // role whose tree parent this binding set
};

/// Lexicographic: semantic class, then expectation, then recency, then
/// template rank. Lower recency/template values are preferred.
struct PreferenceVector {
  SemClass semantic = SemClass::Ok;
  bool expectation_satisfied = false;
  int recency = 0;
  int template_rank = 0;

  bool operator==(const PreferenceVector&) const = default;
};

// True when `a` strictly outranks `b`.
bool preferred(const PreferenceVector& a, const PreferenceVector& b);

enum class SiteKind {
  Attach,  // fill an open position of an existing node
  Adjoin,  // wrap an existing node in an adjunction template
  Open     // start a new fragment rooted at a fresh projection
};

/// A concrete attachment point. For Adjoin, `parent` is the wrapper node
/// and `adjoin_target` the node it wraps; for Open, `parent` is the new
/// fragment root itself.
struct SiteRef {
  SiteKind kind = SiteKind::Attach;
  NodeId parent = 0;
  std::size_t tmpl = 0;
  std::size_t position = 0;
  std::optional<NodeId> adjoin_target;

  bool operator==(const SiteRef&) const = default;
};

enum class AltStatus { Viable, Violating, Consumed };

struct Alternative {
  AltId id = 0;
  NodeId child = 0;  // top node of the rejected structure
  SiteRef site;
  PreferenceVector preference;
  AltStatus status = AltStatus::Viable;
  std::size_t birth = 0;    // token index of the decision
  NodeId displaced = 0;     // top node of the structure chosen instead
};

struct Counters {
  std::size_t node_constructions = 0;
  std::size_t attachments = 0;
  std::size_t detachments = 0;
  std::size_t recoveries = 0;
  std::size_t retained_peak = 0;

  bool operator==(const Counters&) const = default;
};

class StructureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The evolving interpretation of one sentence. A plain value: copying a
/// state yields an independent scratch interpretation.
class ParseState {
 public:
  explicit ParseState(const KnowledgeBase& kb);

  const KnowledgeBase& kb() const { return *kb_; }

  NodeId make_phrasal(const std::string& category, std::size_t tmpl);
  NodeId make_leaf(const LexicalEntry& entry, std::size_t token, std::size_t entry_index);
  NodeId clone_leaf(NodeId leaf);
  MeaningId make_meaning(const std::string& concept_name, std::size_t token);
  RoleId make_role(const std::string& label, MeaningId filler);
  void assign_semantics(NodeId leaf, std::optional<MeaningId> meaning, std::optional<RoleId> role);

  void attach(NodeId child, NodeId parent, std::size_t position);
  void detach(NodeId node);
  void specialize_role(RoleId role, const std::string& target);

  // Pushes `alt` (assigning its id), evicts the oldest entries beyond
  // `capacity` and updates retained_peak. Returns the id, or nullopt when
  // the alternative was evicted immediately.
  std::optional<AltId> retain(Alternative alt, std::optional<std::size_t> capacity = std::nullopt);
  // Most recent viable match, else most recent violating match; the
  // returned alternative is marked consumed.
  std::optional<Alternative> reactivate(const std::function<bool(const Alternative&)>& pred);
  void prune(std::size_t capacity);
  std::size_t store_size() const;

  void add_binding(Binding b);

  const ParseNode& node(NodeId id) const;
  const RoleNode& role(RoleId id) const;
  const MeaningInstance& meaning(MeaningId id) const;
  RoleNode& role_mut(RoleId id);

  const std::vector<ParseNode>& nodes() const { return nodes_; }
  const std::vector<RoleNode>& roles() const { return roles_; }
  const std::vector<MeaningInstance>& meanings() const { return meanings_; }
  const std::vector<Alternative>& alternatives() const { return alternatives_; }
  const std::vector<Binding>& bindings() const { return bindings_; }
  const Counters& counters() const { return counters_; }
  Counters& counters() { return counters_; }

  std::vector<NodeId>& fragments() { return fragments_; }
  const std::vector<NodeId>& fragments() const { return fragments_; }

  const Template& template_of(NodeId id) const;
  std::optional<std::size_t> last_filled(NodeId id) const;
  std::optional<NodeId> child_at(NodeId id, std::size_t position) const;
  // All obligatory positions of this node are filled.
  bool complete(NodeId id) const;
  bool subtree_complete(NodeId id) const;
  std::optional<MeaningId> head_meaning(NodeId id) const;
  std::optional<RoleId> head_role(NodeId id) const;
  bool is_head_child(NodeId id) const;
  bool has_binding(NodeId site, NodeId child) const;
  // Root, last child, last child of that, ... down to a leaf.
  std::vector<NodeId> right_frontier(NodeId root) const;
  std::vector<NodeId> subtree(NodeId root) const;
  NodeId root_of(NodeId id) const;

  // Throws StructureError when any tree invariant is broken.
  void check_well_formed() const;

 private:
  ParseNode& mut(NodeId id);
  void refresh_spans(NodeId from);
  void drop_bindings(NodeId site, NodeId child);

  const KnowledgeBase* kb_;
  std::vector<ParseNode> nodes_;
  std::vector<RoleNode> roles_;
  std::vector<MeaningInstance> meanings_;
  std::vector<Binding> bindings_;
  std::vector<Alternative> alternatives_;
  std::vector<NodeId> fragments_;
  std::vector<std::pair<std::string, std::size_t>> ordinals_;
  Counters counters_;
  AltId next_alt_ = 0;
};

}  // namespace reparse
