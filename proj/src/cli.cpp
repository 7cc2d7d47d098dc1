#include "reparse/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "reparse/oracle.hpp"
#include "reparse/render.hpp"

#ifndef REPARSE_KB_DIR
#define REPARSE_KB_DIR "kb"
#endif

namespace reparse {

namespace {

struct Options {
  std::string kb_dir = REPARSE_KB_DIR;
  std::vector<std::string> words;
  std::string corpus_path;
  bool trace = false;
  std::vector<std::string> lesions;
  std::optional<std::size_t> capacity;
  bool unknown_as_noun = false;
  std::string format = "all";
};

EngineConfig make_config(const Options& o) {
  static const std::map<std::string, Lesion> names{
      {"syntax", Lesion::Syntax}, {"semantics", Lesion::Semantics}, {"link", Lesion::Link}};
  EngineConfig c;
  c.capacity = o.capacity;
  c.unknown_as_noun = o.unknown_as_noun;
  for (const std::string& l : o.lesions) c.lesions.insert(names.at(l));
  return c;
}

std::string join_words(const std::vector<std::string>& words) {
  std::string s;
  for (const std::string& w : words) s += (s.empty() ? "" : " ") + w;
  return s;
}

void add_engine_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--lesion", o.lesions, "Disable a knowledge source or the link between them")
      ->check(CLI::IsMember({"syntax", "semantics", "link"}));
  cmd->add_option("--capacity", o.capacity, "Maximum retained alternatives");
  cmd->add_flag("--unknown-as-noun", o.unknown_as_noun, "Read unknown words as common nouns");
}

int do_parse(const Options& o, const KnowledgeBase& kb, std::ostream& out) {
  auto tokens = tokenize(join_words(o.words));
  Interpretation in = Engine(kb, make_config(o)).process_sentence(tokens);
  if (o.trace)
    for (const TraceEvent& e : in.trace) out << e.line << "\n";
  if (o.format == "tree")
    out << render_tree(in);
  else if (o.format == "roles")
    out << render_roles(in);
  else if (o.format == "meaning")
    out << render_meaning(in);
  else
    out << render_all(in);
  return in.status == Status::Complete ? kExitOk : kExitFragments;
}

int do_corpus(const Options& o, const KnowledgeBase& kb, std::ostream& out) {
  Engine engine(kb, make_config(o));
  out << corpus_header() << "\n";
  bool all_complete = true;
  for (const std::string& sentence : read_corpus(o.corpus_path)) {
    try {
      Interpretation in = engine.process_sentence(tokenize(sentence));
      out << corpus_row(sentence, in) << "\n";
      all_complete = all_complete && in.status == Status::Complete;
    } catch (const std::exception& e) {
      out << sentence << "\t0\terror: " << e.what() << "\t0\t0\t0\t0\t0\t\n";
      all_complete = false;
    }
  }
  return all_complete ? kExitOk : kExitFragments;
}

int do_oracle(const Options& o, const KnowledgeBase& kb, std::ostream& out) {
  auto tokens = tokenize(join_words(o.words));
  auto parses = enumerate_parses(tokens, kb);
  out << "parses: " << parses.size() << "\n";
  for (const OracleParse& p : parses) {
    out << (semantically_clean(p) ? "clean " : "violation ") << render_oracle_tree(*p.tree, tokens)
        << "\n";
    for (const OracleBinding& b : p.bindings)
      out << "  " << b.event << " " << b.role << "=" << b.filler << " " << to_string(b.result)
          << "\n";
  }
  return parses.empty() ? kExitFragments : kExitOk;
}

int do_check_kb(const KnowledgeBase& kb, std::ostream& out) {
  out << "categories: " << kb.categories().size() << "\n"
      << "concepts: " << kb.concepts().size() << "\n"
      << "role labels: " << kb.role_labels().size() << "\n"
      << "words: " << kb.word_count() << "\n";
  return kExitOk;
}

}  // namespace

std::vector<std::string> read_corpus(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read corpus " + path);
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    auto last = line.find_last_not_of(" \t\r");
    out.push_back(line.substr(first, last - first + 1));
  }
  return out;
}

std::string corpus_row(const std::string& sentence, const Interpretation& interp) {
  std::vector<std::size_t> events(interp.tokens.size(), 0);
  for (const TraceEvent& e : interp.trace)
    if (e.token < events.size()) ++events[e.token];
  std::string per_word;
  for (std::size_t n : events) per_word += (per_word.empty() ? "" : ",") + std::to_string(n);
  const Counters& c = interp.counters;
  std::ostringstream row;
  row << sentence << "\t" << interp.tokens.size() << "\t" << to_string(interp.status) << "\t"
      << c.recoveries << "\t" << c.retained_peak << "\t" << c.node_constructions << "\t"
      << c.attachments << "\t" << c.detachments << "\t" << per_word;
  return row.str();
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Incremental sentence interpreter with garden-path recovery", "reparse"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--kb", o.kb_dir, "Knowledge base directory");

  auto* parse = app.add_subcommand("parse", "Interpret one sentence");
  parse->add_option("words", o.words, "Sentence")->required();
  parse->add_flag("--trace", o.trace, "Print the control-loop trace");
  parse->add_option("--format", o.format, "Output format")
      ->check(CLI::IsMember({"tree", "roles", "meaning", "all"}));
  add_engine_flags(parse, o);

  auto* corpus = app.add_subcommand("corpus", "Run a corpus and print a TSV report");
  corpus->add_option("file", o.corpus_path, "Corpus file")->required();
  add_engine_flags(corpus, o);

  auto* oracle = app.add_subcommand("oracle", "List every grammatical parse");
  oracle->add_option("words", o.words, "Sentence")->required();

  auto* check = app.add_subcommand("check-kb", "Load and validate the knowledge base");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }

  try {
    KnowledgeBase kb = KnowledgeBase::load_dir(o.kb_dir);
    if (*parse) return do_parse(o, kb, out);
    if (*corpus) return do_corpus(o, kb, out);
    if (*oracle) return do_oracle(o, kb, out);
    if (*check) return do_check_kb(kb, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}

}  // namespace reparse
