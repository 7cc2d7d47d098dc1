#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "reparse/cli.hpp"
#include "reparse/engine.hpp"

using namespace reparse;

namespace {

const KnowledgeBase& kb() {
  static const KnowledgeBase k = KnowledgeBase::load_dir(REPARSE_KB_DIR);
  return k;
}

const char* kText1 = "the man saw the horse.";
const char* kText2 = "the man saw the woman with the horse.";
const char* kText3 = "the officers taught at the military academy were very demanding.";

Interpretation run(const char* sentence, EngineConfig config = {}) {
  return Engine(kb(), config).process_sentence(tokenize(sentence));
}

std::vector<std::string> lines(const Interpretation& in, TraceKind kind) {
  std::vector<std::string> out;
  for (const auto& e : in.trace)
    if (e.kind == kind) out.push_back(e.line);
  return out;
}

bool has_line(const Interpretation& in, const std::string& text) {
  return std::any_of(in.trace.begin(), in.trace.end(),
                     [&](const TraceEvent& e) { return e.line == text; });
}

// Concept of the meaning bound to `role` on the sentence meaning.
std::string bound(const Interpretation& in, MeaningId head, const std::string& role) {
  for (const auto& [r, f] : in.state.meaning(head).bindings)
    if (r == role) return in.state.meaning(f).tag;
  return "";
}

}  // namespace

TEST_CASE("tokenize strips punctuation and splits on whitespace") {
  CHECK(tokenize("  the man,  saw the horse. ") ==
        std::vector<std::string>{"the", "man", "saw", "the", "horse"});
  CHECK(tokenize("").empty());
}

TEST_CASE("empty input is rejected") {
  CHECK_THROWS_AS(Engine(kb(), {}).process_sentence({}), EmptyInputError);
}

TEST_CASE("unknown words") {
  CHECK_THROWS_AS(run("the dog saw the man"), UnknownWordError);
  EngineConfig c;
  c.unknown_as_noun = true;
  auto in = run("the dog saw the man", c);
  CHECK(in.status == Status::Complete);
}

TEST_CASE("text 1: complete with SEE1 actor and object") {
  auto in = run(kText1);
  REQUIRE(in.status == Status::Complete);
  REQUIRE(in.sentence_meaning);
  CHECK(in.state.meaning(*in.sentence_meaning).tag == "SEE1");
  CHECK(bound(in, *in.sentence_meaning, "ACTOR") == "MAN1");
  CHECK(bound(in, *in.sentence_meaning, "OBJECT") == "HORSE1");
  CHECK(in.counters.recoveries == 0);
  CHECK(lines(in, TraceKind::Fail).empty());
  CHECK_NOTHROW(in.state.check_well_formed());
}

TEST_CASE("text 1: both senses of 'saw' are accessed") {
  auto in = run(kText1);
  CHECK(has_line(in, "ACCESS w=saw entries=[V/transitive/SEE,N/common/SAW-TOOL]"));
}

TEST_CASE("text 2: semantics overrides minimal attachment") {
  auto in = run(kText2);
  REQUIRE(in.status == Status::Complete);
  auto evals = lines(in, TraceKind::Evaluate);
  CHECK(std::any_of(evals.begin(), evals.end(), [](const std::string& l) {
    return l.find("sem=VIOLATION exp=1") != std::string::npos;
  }));
  MeaningId see = *in.sentence_meaning;
  CHECK(bound(in, see, "INSTRUMENT").empty());
  CHECK(bound(in, see, "OBJECT") == "WOMAN1");
  // The woman has the horse.
  bool accompanied = false;
  for (const auto& m : in.state.meanings())
    for (const auto& [r, f] : m.bindings)
      if (m.tag == "WOMAN1" && r == "ACCOMPANIMENT" && in.state.meaning(f).tag == "HORSE1")
        accompanied = true;
  CHECK(accompanied);
}

TEST_CASE("text 2 without semantics attaches to the verb") {
  EngineConfig c;
  c.lesions = {Lesion::Semantics};
  auto in = run(kText2, c);
  REQUIRE(in.status == Status::Complete);
  const ParseState& s = in.state;
  NodeId vp = s.node(in.parse_roots[0]).children[1];
  REQUIRE(s.node(vp).children.size() == 3);
  CHECK(s.node(s.node(vp).children[2]).category == "PP");
  CHECK(lines(in, TraceKind::Bind).empty());
  auto evals = lines(in, TraceKind::Evaluate);
  CHECK(std::all_of(evals.begin(), evals.end(), [](const std::string& l) {
    return l.find("sem=UNKNOWN") != std::string::npos;
  }));
}

TEST_CASE("text 3: garden path recovered by reactivating the reduced relative") {
  auto in = run(kText3);
  REQUIRE(in.status == Status::Complete);
  CHECK(in.counters.recoveries == 1);
  REQUIRE(in.recoveries.size() == 1);
  const auto& rec = in.recoveries[0];
  CHECK(in.tokens[rec.token] == "were");
  CHECK(rec.after.node_constructions == rec.before.node_constructions);
  CHECK(lines(in, TraceKind::Recover).size() == 1);
  CHECK(lines(in, TraceKind::Fail).size() == 1);

  const ParseState& s = in.state;
  NodeId subj = s.node(in.parse_roots[0]).children[0];
  CHECK(s.node(subj).category == "NP");
  NodeId last = s.node(subj).children.back();
  CHECK(s.node(last).category == "RRC");
  CHECK(s.node(last).span == Span{2, 7});
  MeaningId be = *in.sentence_meaning;
  CHECK(in.state.meaning(be).concept_name == "BE");
  CHECK(bound(in, be, "ACTOR") == "OFFICER1");
  CHECK_NOTHROW(s.check_well_formed());
}

TEST_CASE("text 3 with nothing retained ends in fragments") {
  EngineConfig c;
  c.capacity = 0;
  auto in = run(kText3, c);
  CHECK(in.status == Status::Fragments);
  CHECK(in.counters.recoveries == 0);
  CHECK(in.counters.retained_peak == 0);
  CHECK(lines(in, TraceKind::Recover).empty());
  auto fails = lines(in, TraceKind::Fail);
  REQUIRE(fails.size() >= 2);
  CHECK(fails[0] == "FAIL node=14 reason=no-site");
  CHECK(fails[1] == "FAIL node=14 reason=recovery-exhausted");
}

TEST_CASE("lesion link: a full tree but no bindings") {
  EngineConfig c;
  c.lesions = {Lesion::Link};
  auto in = run(kText1, c);
  CHECK(in.status == Status::Complete);
  CHECK(lines(in, TraceKind::Bind).empty());
  CHECK(in.state.bindings().empty());
  CHECK_FALSE(in.state.meanings().empty());
}

TEST_CASE("lesion syntax: semantic fragments still bind") {
  EngineConfig c;
  c.lesions = {Lesion::Syntax};
  auto in = run(kText1, c);
  CHECK(in.status == Status::Fragments);
  CHECK(in.parse_roots.empty());
  CHECK(lines(in, TraceKind::Propose).empty());
  REQUIRE(in.meaning_roots.size() == 1);
  MeaningId see = in.meaning_roots[0];
  CHECK(in.state.meaning(see).tag == "SEE1");
  CHECK(bound(in, see, "ACTOR") == "MAN1");
  CHECK(bound(in, see, "OBJECT") == "HORSE1");
}

TEST_CASE("fragments: a bare plural noun is one NP") {
  auto in = run("horses");
  CHECK(in.status == Status::Fragments);
  REQUIRE(in.parse_roots.size() == 1);
  CHECK(in.state.node(in.parse_roots[0]).category == "NP");
  REQUIRE(in.role_roots.size() == 1);
  CHECK(in.state.role(in.role_roots[0]).label == "THING");
  CHECK(in.state.meaning(in.state.role(in.role_roots[0]).filler).tag == "HORSE1");
}

TEST_CASE("first determiner yields one candidate") {
  Session session(kb(), {});
  session.step("the");
  auto proposals = std::count_if(session.trace().begin(), session.trace().end(),
                                 [](const TraceEvent& e) { return e.kind == TraceKind::Propose; });
  CHECK(proposals == 1);
  CHECK(session.trace()[1].line == "PROPOSE node=1 sites=[2.0]");
}

TEST_CASE("corpus: well-formed states and no unmarked violations") {
  for (const std::string& sentence : read_corpus(REPARSE_CORPUS)) {
    CAPTURE(sentence);
    auto in = run(sentence.c_str());
    CHECK_NOTHROW(in.state.check_well_formed());
    if (in.status == Status::Complete)
      for (const auto& b : in.state.bindings()) CHECK(b.result != SemClass::Violation);
  }
}

TEST_CASE("runs are deterministic") {
  for (const std::string& sentence : read_corpus(REPARSE_CORPUS)) {
    auto a = run(sentence.c_str());
    auto b = run(sentence.c_str());
    REQUIRE(a.trace.size() == b.trace.size());
    for (std::size_t i = 0; i < a.trace.size(); ++i) CHECK(a.trace[i].line == b.trace[i].line);
    CHECK(a.counters == b.counters);
  }
}
