#include "reparse/kb.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <fstream>
#include <set>
#include <sstream>

namespace reparse {

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw KbError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

const std::string& atom(const Sexpr& e, const char* what) {
  if (!e.is_atom()) throw KbError(std::string("expected ") + what, e.line, e.column);
  return e.text;
}

const std::string& ident(const Sexpr& e, const char* what) {
  const std::string& text = atom(e, what);
  if (!is_identifier(text))
    throw KbError("malformed identifier '" + text + "'", e.line, e.column);
  return text;
}

// (key value) with a single identifier value.
const std::string& keyed(const Sexpr& e, std::string_view key) {
  if (!e.is_form(key) || e.items.size() != 2)
    throw KbError("expected (" + std::string(key) + " <identifier>)", e.line, e.column);
  return ident(e.items[1], "identifier");
}

}  // namespace

UnknownWordError::UnknownWordError(std::string word, std::size_t position)
    : std::runtime_error("UNKNOWN_WORD \"" + word + "\" at token " + std::to_string(position)),
      word_(std::move(word)),
      position_(position) {}

std::string fold_case(std::string_view word) {
  std::string out(word);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool is_identifier(std::string_view text) {
  if (text.empty() || !std::isalpha(static_cast<unsigned char>(text.front()))) return false;
  return std::all_of(text.begin(), text.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '-';
  });
}

KnowledgeBase KnowledgeBase::load(std::string_view lexicon_text, std::string_view grammar_text,
                                  std::string_view concepts_text) {
  KnowledgeBase kb;
  kb.parse_concepts(parse_sexprs(concepts_text));
  kb.parse_grammar(parse_sexprs(grammar_text));
  kb.parse_lexicon(parse_sexprs(lexicon_text));
  kb.validate();
  return kb;
}

KnowledgeBase KnowledgeBase::load_dir(const std::filesystem::path& dir) {
  return load(read_file(dir / "lexicon.sexp"), read_file(dir / "grammar.sexp"),
              read_file(dir / "concepts.sexp"));
}

void KnowledgeBase::parse_lexicon(const std::vector<Sexpr>& forms) {
  for (const Sexpr& form : forms) {
    if (!form.is_form("word") || form.items.size() < 3 || !form.items[1].is_string())
      throw KbError("expected (word \"form\" (entry ...) ...)", form.line, form.column);
    std::string word = fold_case(form.items[1].text);
    if (by_word_.count(word) != 0)
      throw KbError("duplicate word \"" + word + "\"", form.line, form.column);
    for (std::size_t i = 2; i < form.items.size(); ++i) {
      const Sexpr& entry = form.items[i];
      if (!entry.is_form("entry") || entry.items.size() != 4)
        throw KbError("expected (entry (cat C) (subcat F) (sense S))", entry.line, entry.column);
      LexicalEntry e;
      e.word = word;
      e.category = keyed(entry.items[1], "cat");
      e.subcategory = keyed(entry.items[2], "subcat");
      e.sense = keyed(entry.items[3], "sense");
      if (!has_category(e.category))
        throw KbError("undefined category '" + e.category + "'", entry.line, entry.column);
      if (e.sense != kNoSense && !has_concept(e.sense))
        throw KbError("undefined concept '" + e.sense + "'", entry.line, entry.column);
      by_word_[word].push_back(entries_.size());
      entries_.push_back(std::move(e));
    }
  }
}

void KnowledgeBase::parse_grammar(const std::vector<Sexpr>& forms) {
  // Two passes so templates may reference categories defined later.
  for (const Sexpr& form : forms) {
    if (!form.is_form("category") || form.items.size() < 2)
      throw KbError("expected (category NAME ...)", form.line, form.column);
    CategoryNode node;
    node.name = ident(form.items[1], "category name");
    if (category_index_.count(node.name) != 0)
      throw KbError("duplicate category '" + node.name + "'", form.line, form.column);
    bool pending_head = false;
    for (std::size_t i = 2; i < form.items.size(); ++i) {
      const Sexpr& item = form.items[i];
      if (item.is_form("template")) {
        if (pending_head)
          throw KbError("template without (head N) in category " + node.name, item.line,
                        item.column);
        Template t;
        for (std::size_t k = 1; k < item.items.size(); ++k) {
          const Sexpr& el = item.items[k];
          if (!el.is_list() || el.items.empty())
            throw KbError("expected (CATEGORY options...)", el.line, el.column);
          TemplateElement te;
          te.category = ident(el.items[0], "category");
          for (std::size_t j = 1; j < el.items.size(); ++j) {
            const std::string& opt = atom(el.items[j], "option");
            if (opt == ":opt") {
              te.optional = true;
            } else if (opt == ":inverse") {
              te.inverse = true;
            } else if (opt == ":subcat" || opt == ":role") {
              if (j + 1 >= el.items.size())
                throw KbError(opt + " needs a value", el.line, el.column);
              const std::string& value = atom(el.items[++j], "option value");
              (opt == ":subcat" ? te.subcategory : te.role) = value;
            } else {
              throw KbError("unknown template option '" + opt + "'", el.items[j].line,
                            el.items[j].column);
            }
          }
          t.elements.push_back(std::move(te));
        }
        if (t.elements.empty())
          throw KbError("empty template in category " + node.name, item.line, item.column);
        node.templates.push_back(std::move(t));
        pending_head = true;
      } else if (item.is_form("head")) {
        if (!pending_head || item.items.size() != 2)
          throw KbError("(head N) must follow a template", item.line, item.column);
        const std::string& n = atom(item.items[1], "head position");
        std::size_t pos = 0;
        try {
          pos = std::stoul(n);
        } catch (const std::exception&) {
          throw KbError("head position must be a number", item.line, item.column);
        }
        Template& t = node.templates.back();
        if (pos < 1 || pos > t.elements.size())
          throw KbError("head position out of range", item.line, item.column);
        t.head = pos - 1;
        pending_head = false;
      } else if (item.is_form("role")) {
        node.primitive_role = keyed(item, "role");
      } else {
        throw KbError("unknown category clause", item.line, item.column);
      }
    }
    if (pending_head)
      throw KbError("template without (head N) in category " + node.name, form.line,
                    form.column);
    category_index_[node.name] = categories_.size();
    categories_.push_back(std::move(node));
  }
  if (categories_.empty()) throw KbError("no categories defined");
}

void KnowledgeBase::parse_concepts(const std::vector<Sexpr>& forms) {
  for (const Sexpr& form : forms) {
    if (form.is_form("role")) {
      if (form.items.size() < 2) throw KbError("expected (role LABEL ...)", form.line, form.column);
      RoleLabelNode r;
      r.name = ident(form.items[1], "role label");
      for (std::size_t i = 2; i < form.items.size(); ++i) {
        const Sexpr& item = form.items[i];
        if (!item.is_form("specializes"))
          throw KbError("expected (specializes LABEL...)", item.line, item.column);
        for (std::size_t k = 1; k < item.items.size(); ++k)
          r.specializes.push_back(ident(item.items[k], "role label"));
      }
      if (role_index_.count(r.name) != 0)
        throw KbError("duplicate role '" + r.name + "'", form.line, form.column);
      role_index_[r.name] = role_labels_.size();
      role_labels_.push_back(std::move(r));
      continue;
    }
    if (!form.is_form("concept") || form.items.size() < 2)
      throw KbError("expected (concept NAME ...) or (role LABEL ...)", form.line, form.column);
    ConceptNode c;
    c.name = ident(form.items[1], "concept name");
    if (c.name == kNoSense) throw KbError("NONE is reserved", form.line, form.column);
    for (std::size_t i = 2; i < form.items.size(); ++i) {
      const Sexpr& item = form.items[i];
      if (item.is_form("isa")) {
        for (std::size_t k = 1; k < item.items.size(); ++k)
          c.isa.push_back(ident(item.items[k], "concept"));
      } else if (item.is_form("slot") && item.items.size() == 3) {
        c.slots.emplace_back(ident(item.items[1], "role label"), ident(item.items[2], "concept"));
      } else if (item.is_form("attach") && item.items.size() == 3) {
        c.attach_roles.emplace_back(ident(item.items[1], "category"),
                                    ident(item.items[2], "role label"));
      } else {
        throw KbError("unknown concept clause", item.line, item.column);
      }
    }
    if (concept_index_.count(c.name) != 0)
      throw KbError("duplicate concept '" + c.name + "'", form.line, form.column);
    concept_index_[c.name] = concepts_.size();
    concepts_.push_back(std::move(c));
  }
}

void KnowledgeBase::validate() const {
  auto need_role = [&](const std::string& label, const std::string& context) {
    if (!has_role_label(label))
      throw KbError("undefined role label '" + label + "' in " + context);
  };
  auto need_concept = [&](const std::string& name, const std::string& context) {
    if (!has_concept(name)) throw KbError("undefined concept '" + name + "' in " + context);
  };
  auto need_category = [&](const std::string& name, const std::string& context) {
    if (!has_category(name)) throw KbError("undefined category '" + name + "' in " + context);
  };

  for (const RoleLabelNode& r : role_labels_)
    for (const std::string& s : r.specializes) need_role(s, "role " + r.name);
  // Specialization table must be a DAG.
  for (const RoleLabelNode& r : role_labels_)
    if (can_specialize(r.name, r.name))
      throw KbError("role specialization cycle through '" + r.name + "'");

  for (const CategoryNode& c : categories_) {
    if (c.primitive_role) need_role(*c.primitive_role, "category " + c.name);
    for (const Template& t : c.templates)
      for (const TemplateElement& e : t.elements) {
        need_category(e.category, "category " + c.name);
        if (e.role && *e.role != kPrepositionRole) need_role(*e.role, "category " + c.name);
      }
  }
  for (const ConceptNode& c : concepts_) {
    for (const std::string& p : c.isa) need_concept(p, "concept " + c.name);
    for (const auto& [role, restriction] : c.slots) {
      need_role(role, "concept " + c.name);
      need_concept(restriction, "concept " + c.name);
    }
    for (const auto& [cat, role] : c.attach_roles) {
      need_category(cat, "concept " + c.name);
      need_role(role, "concept " + c.name);
    }
  }
  check_isa_acyclic();
}

void KnowledgeBase::check_isa_acyclic() const {
  // 0 = unvisited, 1 = on stack, 2 = done
  std::vector<int> mark(concepts_.size(), 0);
  std::vector<std::size_t> stack;
  auto visit = [&](auto&& self, std::size_t i) -> void {
    mark[i] = 1;
    stack.push_back(i);
    for (const std::string& p : concepts_[i].isa) {
      std::size_t j = concept_index_.find(p)->second;
      if (mark[j] == 1) {
        std::string cycle;
        auto from = std::find(stack.begin(), stack.end(), j);
        for (auto it = from; it != stack.end(); ++it) cycle += concepts_[*it].name + " -> ";
        cycle += concepts_[j].name;
        throw KbError("ISA cycle: " + cycle);
      }
      if (mark[j] == 0) self(self, j);
    }
    stack.pop_back();
    mark[i] = 2;
  };
  for (std::size_t i = 0; i < concepts_.size(); ++i)
    if (mark[i] == 0) visit(visit, i);
}

std::vector<LexicalEntry> KnowledgeBase::lexical_access(std::string_view word,
                                                        std::size_t position) const {
  std::string folded = fold_case(word);
  auto it = by_word_.find(folded);
  if (it == by_word_.end()) throw UnknownWordError(folded, position);
  std::vector<LexicalEntry> out;
  out.reserve(it->second.size());
  for (std::size_t i : it->second) out.push_back(entries_[i]);
  return out;
}

bool KnowledgeBase::knows_word(std::string_view word) const {
  return by_word_.count(fold_case(word)) != 0;
}

bool KnowledgeBase::isa_subsumes(std::string_view concept_name,
                                 std::string_view restriction) const {
  concept_node(restriction);  // throws when undefined
  std::deque<std::string_view> queue{concept_node(concept_name).name};
  std::set<std::string_view> seen;
  while (!queue.empty()) {
    std::string_view c = queue.front();
    queue.pop_front();
    if (c == restriction) return true;
    if (!seen.insert(c).second) continue;
    for (const std::string& p : concept_node(c).isa) queue.push_back(p);
  }
  return false;
}

std::optional<std::string> KnowledgeBase::slot_restriction(std::string_view concept_name,
                                                           std::string_view role) const {
  std::deque<std::string_view> queue{concept_node(concept_name).name};
  std::set<std::string_view> seen;
  while (!queue.empty()) {
    const ConceptNode& c = concept_node(queue.front());
    queue.pop_front();
    if (!seen.insert(c.name).second) continue;
    for (const auto& [label, restriction] : c.slots)
      if (label == role) return restriction;
    for (const std::string& p : c.isa) queue.push_back(p);
  }
  return std::nullopt;
}

std::optional<std::string> KnowledgeBase::preposition_role(std::string_view sense,
                                                           std::string_view parent_category) const {
  if (!has_concept(sense)) return std::nullopt;
  for (const auto& [cat, role] : concept_node(sense).attach_roles)
    if (cat == parent_category) return role;
  return std::nullopt;
}

bool KnowledgeBase::can_specialize(std::string_view from, std::string_view to) const {
  auto it = role_index_.find(from);
  if (it == role_index_.end()) return false;
  std::deque<std::size_t> queue{it->second};
  std::set<std::size_t> seen;
  while (!queue.empty()) {
    std::size_t i = queue.front();
    queue.pop_front();
    for (const std::string& next : role_labels_[i].specializes) {
      if (next == to) return true;
      auto j = role_index_.find(next);
      if (j != role_index_.end() && seen.insert(j->second).second) queue.push_back(j->second);
    }
  }
  return false;
}

bool KnowledgeBase::has_role_label(std::string_view label) const {
  return role_index_.count(label) != 0;
}

const CategoryNode& KnowledgeBase::category(std::string_view name) const {
  auto it = category_index_.find(name);
  if (it == category_index_.end())
    throw std::out_of_range("undefined category '" + std::string(name) + "'");
  return categories_[it->second];
}

const ConceptNode& KnowledgeBase::concept_node(std::string_view name) const {
  auto it = concept_index_.find(name);
  if (it == concept_index_.end())
    throw std::out_of_range("undefined concept '" + std::string(name) + "'");
  return concepts_[it->second];
}

bool KnowledgeBase::has_category(std::string_view name) const {
  return category_index_.count(name) != 0;
}

bool KnowledgeBase::has_concept(std::string_view name) const {
  return concept_index_.count(name) != 0;
}

std::optional<std::string> KnowledgeBase::primitive_role(std::string_view category) const {
  return this->category(category).primitive_role;
}

}  // namespace reparse
