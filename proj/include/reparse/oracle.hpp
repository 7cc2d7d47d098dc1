#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "reparse/kb.hpp"
#include "reparse/structures.hpp"

namespace reparse {

struct OracleTree {
  std::string category;
  std::optional<std::size_t> tmpl;  // phrasal nodes
  std::size_t position = 0;         // within the parent template
  std::size_t start = 0;
  std::size_t end = 0;
  // lexical nodes
  std::size_t entry = 0;
  std::string features;
  std::string sense;
  std::vector<std::shared_ptr<const OracleTree>> children;
};

struct OracleBinding {
  std::string event;   // CONCEPT@token
  std::string role;
  std::string filler;  // CONCEPT@token
  SemClass result = SemClass::Ok;
};

struct OracleParse {
  std::shared_ptr<const OracleTree> tree;
  std::vector<OracleBinding> bindings;
  std::vector<std::string> meaning_roots;  // instances that fill no slot
};

/// Every complete sentence parse the grammar licenses over `tokens`, with
/// its semantic bindings. Preference-free and exhaustive.
std::vector<OracleParse> enumerate_parses(const std::vector<std::string>& tokens,
                                          const KnowledgeBase& kb);

bool semantically_clean(const OracleParse& parse);

// Shape-and-lexeme signature shared by oracle trees and engine trees.
std::string canonical(const OracleTree& tree);
std::string canonical(const ParseState& state, NodeId root);

std::string render_oracle_tree(const OracleTree& tree, const std::vector<std::string>& tokens);

}  // namespace reparse
