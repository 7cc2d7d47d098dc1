#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "reparse/sexpr.hpp"

namespace reparse {

/// Sense used by function words that contribute no concept.
inline constexpr std::string_view kNoSense = "NONE";

/// Role annotation on a template position that defers the label to the
/// preposition sense of the attached phrase.
inline constexpr std::string_view kPrepositionRole = "prep";

struct LexicalEntry {
  std::string word;  // case-folded surface form
  std::string category;
  std::string subcategory;
  std::string sense;

  bool operator==(const LexicalEntry&) const = default;
};

struct TemplateElement {
  std::string category;
  std::optional<std::string> subcategory;  // constraint on lexical fillers
  bool optional = false;
  // Thematic role a filler of this position takes relative to the head
  // meaning, or kPrepositionRole.
  std::optional<std::string> role;
  // The filler's meaning is the event and the head meaning fills `role`.
  bool inverse = false;
};

struct Template {
  std::vector<TemplateElement> elements;
  std::size_t head = 0;  // 0-based in memory, 1-based in files

  // NP -> NP PP style: position 0 repeats the category and is the head.
  bool is_adjunction(std::string_view owner) const {
    return !elements.empty() && head == 0 && elements.front().category == owner;
  }
};

struct CategoryNode {
  std::string name;
  std::vector<Template> templates;  // empty for lexical categories
  std::optional<std::string> primitive_role;

  bool lexical() const { return templates.empty(); }
};

struct ConceptNode {
  std::string name;
  std::vector<std::string> isa;
  std::vector<std::pair<std::string, std::string>> slots;  // role -> restriction
  // Preposition senses: attachment category -> role label.
  std::vector<std::pair<std::string, std::string>> attach_roles;
};

struct RoleLabelNode {
  std::string name;
  std::vector<std::string> specializes;  // direct successors in the DAG
};

class UnknownWordError : public std::runtime_error {
 public:
  UnknownWordError(std::string word, std::size_t position);
  const std::string& word() const { return word_; }
  std::size_t position() const { return position_; }

 private:
  std::string word_;
  std::size_t position_;
};

/// Immutable after load: lexicon, syntactic category network and the
/// concept network with its role-label inventory.
class KnowledgeBase {
 public:
  static KnowledgeBase load(std::string_view lexicon_text, std::string_view grammar_text,
                            std::string_view concepts_text);
  // Reads lexicon.sexp, grammar.sexp and concepts.sexp from `dir`.
  static KnowledgeBase load_dir(const std::filesystem::path& dir);

  // All entries for `word` in lexicon order; never filtered. Throws
  // UnknownWordError when the word has none.
  std::vector<LexicalEntry> lexical_access(std::string_view word, std::size_t position) const;
  bool knows_word(std::string_view word) const;

  bool isa_subsumes(std::string_view concept_name, std::string_view restriction) const;

  // Restriction on `role` for `concept_name`, searching ISA parents
  // breadth-first in declaration order.
  std::optional<std::string> slot_restriction(std::string_view concept_name,
                                              std::string_view role) const;

  // Role label a preposition sense yields when its phrase attaches under
  // `parent_category`.
  std::optional<std::string> preposition_role(std::string_view sense,
                                              std::string_view parent_category) const;

  // True when `to` is reachable from `from` by one or more edges.
  bool can_specialize(std::string_view from, std::string_view to) const;
  bool has_role_label(std::string_view label) const;

  const CategoryNode& category(std::string_view name) const;
  const ConceptNode& concept_node(std::string_view name) const;
  bool has_category(std::string_view name) const;
  bool has_concept(std::string_view name) const;
  std::optional<std::string> primitive_role(std::string_view category) const;

  const std::vector<CategoryNode>& categories() const { return categories_; }
  const std::vector<ConceptNode>& concepts() const { return concepts_; }
  const std::vector<LexicalEntry>& entries() const { return entries_; }
  const std::vector<RoleLabelNode>& role_labels() const { return role_labels_; }
  std::size_t word_count() const { return by_word_.size(); }

 private:
  void parse_lexicon(const std::vector<Sexpr>& forms);
  void parse_grammar(const std::vector<Sexpr>& forms);
  void parse_concepts(const std::vector<Sexpr>& forms);
  void validate() const;
  void check_isa_acyclic() const;

  std::vector<LexicalEntry> entries_;
  std::map<std::string, std::vector<std::size_t>, std::less<>> by_word_;
  std::vector<CategoryNode> categories_;
  std::map<std::string, std::size_t, std::less<>> category_index_;
  std::vector<ConceptNode> concepts_;
  std::map<std::string, std::size_t, std::less<>> concept_index_;
  std::vector<RoleLabelNode> role_labels_;
  std::map<std::string, std::size_t, std::less<>> role_index_;
};

std::string fold_case(std::string_view word);

bool is_identifier(std::string_view text);

}  // namespace reparse
