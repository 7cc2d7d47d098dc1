#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "reparse/kb.hpp"
#include "reparse/semantic_source.hpp"
#include "reparse/structures.hpp"
#include "reparse/syntax_source.hpp"

namespace reparse {

inline constexpr std::string_view kSentenceCategory = "S";
inline constexpr NodeId kNoNode = static_cast<NodeId>(-1);

enum class Lesion { Syntax, Semantics, Link };

struct EngineConfig {
  std::optional<std::size_t> capacity;  // unlimited when empty
  std::set<Lesion> lesions;
  bool unknown_as_noun = false;
  int trace_verbosity = 1;  // 0 records nothing

  bool lesioned(Lesion l) const { return lesions.count(l) != 0; }
  // Semantic preferences and bindings are unavailable to the control loop.
  bool semantics_cut() const { return lesioned(Lesion::Semantics) || lesioned(Lesion::Link); }
};

enum class TraceKind { Access, Propose, Evaluate, Select, Bind, Fail, Recover };

struct TraceEvent {
  TraceKind kind;
  std::size_t token;  // word being processed when the event fired
  std::string line;
};

enum class Status { Complete, Fragments };

const char* to_string(Status s);

struct RecoveryRecord {
  std::size_t token = 0;
  AltId alternative = 0;
  Counters before;
  Counters after;
};

struct Interpretation {
  explicit Interpretation(ParseState s) : state(std::move(s)) {}

  ParseState state;
  Status status = Status::Fragments;
  std::vector<std::string> tokens;
  std::vector<NodeId> parse_roots;
  std::vector<RoleId> role_roots;
  std::vector<MeaningId> meaning_roots;
  std::optional<MeaningId> sentence_meaning;
  Counters counters;
  std::vector<TraceEvent> trace;
  std::vector<RecoveryRecord> recoveries;
};

class EmptyInputError : public std::invalid_argument {
 public:
  EmptyInputError() : std::invalid_argument("empty input") {}
};

/// An attachment option for a node: where it goes, what it creates, and
/// how the knowledge sources rate it.
struct Candidate {
  std::size_t offer = 0;  // index of the offered node (one per lexical entry)
  NodeId base = 0;        // the offered node
  AttachmentSite site;
  std::vector<NodeId> chain;       // materialized site.creates, bottom-up
  std::optional<NodeId> wrapper;   // adjunction node
  SiteRef ref;
  PreferenceVector preference;

  NodeId top() const { return chain.empty() ? base : chain.back(); }
};

/// The control loop for one sentence. Both knowledge sources are driven
/// through the same propose/evaluate/select/retain cycle.
class Session {
 public:
  Session(const KnowledgeBase& kb, EngineConfig config);

  // Reads one word: access, node construction, propose, evaluate, select,
  // bind; recovers when nothing attaches.
  void step(std::string_view word);
  Interpretation finish();

  // All attachment options for `offers`, materialized. Lexical offers whose
  // category has no primitive role start new fragments; everything else
  // attaches to the fragment rooted at `target`.
  std::vector<Candidate> propose(const std::vector<NodeId>& offers, NodeId target);
  void evaluate(std::vector<Candidate>& candidates) const;
  // Index of the winner and the alternatives retained.
  std::size_t select(const std::vector<Candidate>& candidates);
  // Re-runs semantic binding from `from` to its root.
  void bind_at(NodeId from);
  // Tries retained alternatives until `offers` can attach; true on success.
  bool recover(const std::vector<NodeId>& offers, bool connecting);

  const ParseState& state() const { return state_; }
  const std::vector<TraceEvent>& trace() const { return trace_; }
  std::size_t position() const { return token_; }

 private:
  struct Sink {
    std::vector<std::string> binds;
    SemClass worst = SemClass::Ok;
    bool any = false;
  };

  std::vector<NodeId> construct(const std::vector<LexicalEntry>& entries);
  std::vector<AttachmentSite> sites_for(const ParseState& s, NodeId offer, NodeId target) const;
  NodeId target_for(const ParseState& s, bool connecting) const;
  void commit(ParseState& s, const Candidate& c, Sink& sink) const;
  void place(ParseState& s, NodeId node, const SiteRef& site) const;
  void bind_from(ParseState& s, NodeId from, Sink& sink) const;
  void repair(ParseState& s, const Alternative& alt, Sink& sink) const;
  bool attach_offers(const std::vector<NodeId>& offers, bool connecting);
  void connect_fragments();
  void open_fallback(NodeId leaf);
  void apply_semantic_fragments();
  void emit(TraceKind kind, std::string line);

  const KnowledgeBase* kb_;
  EngineConfig config_;
  SyntaxSource syntax_;
  SemanticSource semantics_;
  ParseState state_;
  std::vector<TraceEvent> trace_;
  std::vector<RecoveryRecord> recoveries_;
  std::vector<std::string> tokens_;
  std::vector<MeaningId> fragment_meanings_;  // syntax-lesioned output
  std::size_t token_ = 0;
};

class Engine {
 public:
  Engine(const KnowledgeBase& kb, EngineConfig config) : kb_(&kb), config_(std::move(config)) {}

  Interpretation process_sentence(const std::vector<std::string>& tokens) const;

 private:
  const KnowledgeBase* kb_;
  EngineConfig config_;
};

// Whitespace split with surrounding punctuation removed.
std::vector<std::string> tokenize(std::string_view sentence);

std::string site_label(const SiteRef& site);

}  // namespace reparse
