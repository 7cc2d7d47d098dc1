#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "reparse/kb.hpp"
#include "reparse/structures.hpp"

namespace reparse {

struct RoleAssignment {
  std::string label;
  SemClass result = SemClass::Ok;
  MeaningId event = 0;   // owner of the slot
  MeaningId filler = 0;
  bool inverse = false;  // the child carries the event, the site head fills the slot
};

/// A role subtree built without syntax: an instance and the participants
/// bound to it.
struct RoleFragment {
  MeaningId root = 0;
  std::vector<std::pair<std::string, MeaningId>> participants;
};

class SemanticSource {
 public:
  explicit SemanticSource(const KnowledgeBase& kb) : kb_(&kb) {}

  std::optional<std::string> primitive_role(const std::string& category) const;

  SemClass selectional_check(const std::string& event_concept, const std::string& slot,
                             const std::string& filler_concept) const;
  SemClass selectional_check(const ParseState& state, MeaningId event, const std::string& slot,
                             MeaningId filler) const;

  // Thematic relation between the head meaning at `site` and the meaning
  // carried up by `child`; nullopt when either side has no meaning yet or
  // the position carries no role.
  std::optional<RoleAssignment> role_assignment(const ParseState& state, NodeId site,
                                                NodeId child) const;

  // Syntax-free role structure over every meaning instance in `state`:
  // each event takes the leftmost unbound instance its ACTOR slot admits,
  // then the next admissible instance after the event as OBJECT. Every
  // instance lands in exactly one fragment.
  std::vector<RoleFragment> semantic_fragments(const ParseState& state) const;

 private:
  const KnowledgeBase* kb_;
};

}  // namespace reparse
