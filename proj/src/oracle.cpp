#include "reparse/oracle.hpp"

#include <map>
#include <set>
#include <tuple>

namespace reparse {

namespace {

using TreePtr = std::shared_ptr<const OracleTree>;
using Forest = std::vector<TreePtr>;

constexpr const char* kStart = "S";

class Chart {
 public:
  Chart(const std::vector<std::string>& tokens, const KnowledgeBase& kb) : kb_(kb) {
    for (std::size_t i = 0; i < tokens.size(); ++i) words_.push_back(kb.lexical_access(tokens[i], i));
  }

  Forest parses(const std::string& cat, std::size_t i, std::size_t j) {
    if (i >= j) return {};
    auto key = std::make_tuple(cat, i, j);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    // A category cannot contain itself over the same span in a finite tree.
    if (!active_.insert(key).second) return {};
    Forest out;
    const CategoryNode& c = kb_.category(cat);
    if (c.lexical()) {
      if (j == i + 1) {
        for (std::size_t e = 0; e < words_[i].size(); ++e) {
          const LexicalEntry& le = words_[i][e];
          if (le.category != cat) continue;
          auto leaf = std::make_shared<OracleTree>();
          leaf->category = cat;
          leaf->start = i;
          leaf->end = j;
          leaf->entry = e;
          leaf->features = le.subcategory;
          leaf->sense = le.sense;
          out.push_back(leaf);
        }
      }
    } else {
      for (std::size_t t = 0; t < c.templates.size(); ++t) {
        for (auto& kids : fill(c.templates[t], 0, i, j)) {
          auto node = std::make_shared<OracleTree>();
          node->category = cat;
          node->tmpl = t;
          node->start = i;
          node->end = j;
          node->children = std::move(kids);
          out.push_back(node);
        }
      }
    }
    active_.erase(key);
    memo_[key] = out;
    return out;
  }

 private:
  // Children sequences for template positions [p..] covering [k, j).
  std::vector<Forest> fill(const Template& t, std::size_t p, std::size_t k, std::size_t j) {
    std::vector<Forest> out;
    if (p == t.elements.size()) {
      if (k == j) out.push_back({});
      return out;
    }
    const TemplateElement& el = t.elements[p];
    if (el.optional)
      for (auto& rest : fill(t, p + 1, k, j)) out.push_back(std::move(rest));
    for (std::size_t m = k + 1; m <= j; ++m) {
      for (const TreePtr& sub : parses(el.category, k, m)) {
        if (el.subcategory && (sub->tmpl || sub->features != *el.subcategory)) continue;
        for (auto& rest : fill(t, p + 1, m, j)) {
          auto placed = std::make_shared<OracleTree>(*sub);
          placed->position = p;
          Forest seq{placed};
          seq.insert(seq.end(), rest.begin(), rest.end());
          out.push_back(std::move(seq));
        }
      }
    }
    return out;
  }

  const KnowledgeBase& kb_;
  std::vector<std::vector<LexicalEntry>> words_;
  std::map<std::tuple<std::string, std::size_t, std::size_t>, Forest> memo_;
  std::set<std::tuple<std::string, std::size_t, std::size_t>> active_;
};

struct Meaning {
  std::string concept_name;
  std::size_t token;
  std::string id() const { return concept_name + "@" + std::to_string(token); }
};

class Interpreter {
 public:
  explicit Interpreter(const KnowledgeBase& kb) : kb_(kb) {}

  std::optional<Meaning> walk(const OracleTree& n, std::vector<OracleBinding>& out) const {
    if (!n.tmpl) {
      if (n.sense == kNoSense || !kb_.category(n.category).primitive_role) return std::nullopt;
      return Meaning{n.sense, n.start};
    }
    const Template& t = kb_.category(n.category).templates[*n.tmpl];
    std::vector<std::optional<Meaning>> carried;
    std::optional<Meaning> head;
    for (const TreePtr& c : n.children) {
      carried.push_back(walk(*c, out));
      if (c->position == t.head) head = carried.back();
    }
    if (!head) return std::nullopt;
    for (std::size_t k = 0; k < n.children.size(); ++k) {
      const OracleTree& c = *n.children[k];
      const TemplateElement& el = t.elements[c.position];
      if (c.position == t.head || !el.role || !carried[k]) continue;
      std::optional<std::string> label = *el.role;
      if (*label == kPrepositionRole) label = kb_.preposition_role(first_sense(c), n.category);
      if (!label) continue;
      const Meaning& event = el.inverse ? *carried[k] : *head;
      const Meaning& filler = el.inverse ? *head : *carried[k];
      SemClass result = SemClass::Unknown;
      if (auto r = kb_.slot_restriction(event.concept_name, *label))
        result = kb_.isa_subsumes(filler.concept_name, *r) ? SemClass::Ok : SemClass::Violation;
      out.push_back({event.id(), *label, filler.id(), result});
    }
    return head;
  }

  void collect(const OracleTree& n, std::vector<Meaning>& out) const {
    if (!n.tmpl) {
      if (n.sense != kNoSense && kb_.category(n.category).primitive_role)
        out.push_back({n.sense, n.start});
      return;
    }
    for (const TreePtr& c : n.children) collect(*c, out);
  }

 private:
  static std::string first_sense(const OracleTree& n) {
    const OracleTree* cur = &n;
    while (cur->tmpl && !cur->children.empty()) cur = cur->children.front().get();
    return cur->sense;
  }

  const KnowledgeBase& kb_;
};

std::string canonical_leaf(const std::string& cat, std::size_t entry, std::size_t token) {
  return "(" + cat + ":" + std::to_string(entry) + "@" + std::to_string(token) + ")";
}

}  // namespace

std::vector<OracleParse> enumerate_parses(const std::vector<std::string>& tokens,
                                          const KnowledgeBase& kb) {
  if (tokens.empty()) throw std::invalid_argument("empty input");
  Chart chart(tokens, kb);
  Interpreter interp(kb);
  std::vector<OracleParse> out;
  for (const TreePtr& tree : chart.parses(kStart, 0, tokens.size())) {
    OracleParse p;
    p.tree = tree;
    interp.walk(*tree, p.bindings);
    std::vector<Meaning> all;
    interp.collect(*tree, all);
    std::set<std::string> fillers;
    for (const OracleBinding& b : p.bindings) fillers.insert(b.filler);
    for (const Meaning& m : all)
      if (!fillers.count(m.id())) p.meaning_roots.push_back(m.id());
    out.push_back(std::move(p));
  }
  return out;
}

bool semantically_clean(const OracleParse& parse) {
  for (const OracleBinding& b : parse.bindings)
    if (b.result == SemClass::Violation) return false;
  return true;
}

std::string canonical(const OracleTree& tree) {
  if (!tree.tmpl) return canonical_leaf(tree.category, tree.entry, tree.start);
  std::string out = "(" + tree.category + "#" + std::to_string(*tree.tmpl);
  for (const TreePtr& c : tree.children)
    out += " " + std::to_string(c->position) + "=" + canonical(*c);
  return out + ")";
}

std::string canonical(const ParseState& state, NodeId root) {
  const ParseNode& n = state.node(root);
  if (n.lexical()) return canonical_leaf(n.category, n.entry.value_or(0), n.token.value_or(0));
  std::string out = "(" + n.category + "#" + std::to_string(*n.tmpl);
  for (NodeId c : n.children)
    out += " " + std::to_string(state.node(c).position) + "=" + canonical(state, c);
  return out + ")";
}

std::string render_oracle_tree(const OracleTree& tree, const std::vector<std::string>& tokens) {
  if (!tree.tmpl) return "(" + tree.category + " " + tokens.at(tree.start) + ")";
  std::string out = "(" + tree.category;
  for (const TreePtr& c : tree.children) out += " " + render_oracle_tree(*c, tokens);
  return out + ")";
}

}  // namespace reparse
