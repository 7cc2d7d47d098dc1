#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "reparse/kb.hpp"
#include "reparse/sexpr.hpp"

using namespace reparse;

namespace {

const KnowledgeBase& shipped() {
  static const KnowledgeBase kb = KnowledgeBase::load_dir(REPARSE_KB_DIR);
  return kb;
}

const char* kTinyGrammar = R"(
(category S (template (N :role ACTOR) (V)) (head 2))
(category N (role THING))
(category V (role EVENT))
)";

const char* kTinyConcepts = R"(
(role THING (specializes ACTOR))
(role ACTOR)
(role EVENT)
(concept THING-CONCEPT)
(concept ACT (slot ACTOR THING-CONCEPT))
)";

const char* kTinyLexicon = R"(
(word "dogs" (entry (cat N) (subcat plural) (sense THING-CONCEPT)))
(word "bark" (entry (cat V) (subcat intransitive) (sense ACT)))
)";

std::string load_error(const char* lex, const char* gram, const char* conc) {
  try {
    KnowledgeBase::load(lex, gram, conc);
  } catch (const KbError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("multiple access returns every entry in lexicon order") {
  auto saw = shipped().lexical_access("saw", 2);
  REQUIRE(saw.size() == 2);
  CHECK(saw[0].category == "V");
  CHECK(saw[0].sense == "SEE");
  CHECK(saw[1].category == "N");
  CHECK(saw[1].sense == "SAW-TOOL");

  auto taught = shipped().lexical_access("taught", 0);
  REQUIRE(taught.size() == 2);
  CHECK(taught[0].subcategory == "past-transitive");
  CHECK(taught[1].subcategory == "passive-participle");
}

TEST_CASE("access folds case") {
  CHECK(shipped().lexical_access("The", 0).size() == 1);
  CHECK(shipped().knows_word("HORSE"));
}

TEST_CASE("unknown word reports word and position") {
  try {
    shipped().lexical_access("glorp", 3);
    FAIL("expected UnknownWordError");
  } catch (const UnknownWordError& e) {
    CHECK(e.word() == "glorp");
    CHECK(e.position() == 3);
    CHECK(std::string(e.what()) == "UNKNOWN_WORD \"glorp\" at token 3");
  }
}

TEST_CASE("random lexicons: access returns all entries, in order") {
  std::mt19937 rng(7);
  const std::vector<std::string> cats{"N", "V"};
  const std::vector<std::string> senses{"THING-CONCEPT", "ACT"};
  for (int round = 0; round < 100; ++round) {
    std::string lex;
    std::vector<std::vector<std::pair<std::string, std::string>>> expected;
    int words = 1 + rng() % 6;
    for (int w = 0; w < words; ++w) {
      lex += "(word \"w" + std::to_string(w) + "\"";
      expected.emplace_back();
      int n = 1 + rng() % 4;
      for (int e = 0; e < n; ++e) {
        std::size_t k = rng() % 2;
        std::string sub = "f" + std::to_string(e);
        lex += " (entry (cat " + cats[k] + ") (subcat " + sub + ") (sense " + senses[k] + "))";
        expected.back().emplace_back(cats[k], sub);
      }
      lex += ")\n";
    }
    auto kb = KnowledgeBase::load(lex, kTinyGrammar, kTinyConcepts);
    for (int w = 0; w < words; ++w) {
      auto got = kb.lexical_access("w" + std::to_string(w), 0);
      REQUIRE(got.size() == expected[w].size());
      for (std::size_t e = 0; e < got.size(); ++e) {
        CHECK(got[e].category == expected[w][e].first);
        CHECK(got[e].subcategory == expected[w][e].second);
      }
    }
  }
}

TEST_CASE("isa_subsumes is reflexive and transitive") {
  const auto& kb = shipped();
  CHECK(kb.isa_subsumes("HORSE", "ANIMAL"));
  CHECK(kb.isa_subsumes("HORSE", "PHYSICAL-OBJECT"));
  CHECK_FALSE(kb.isa_subsumes("HORSE", "OPTICAL-INSTRUMENT"));
  CHECK_FALSE(kb.isa_subsumes("ANIMAL", "HORSE"));
  for (const auto& a : kb.concepts()) {
    CHECK(kb.isa_subsumes(a.name, a.name));
    for (const auto& b : kb.concepts())
      for (const auto& c : kb.concepts())
        if (kb.isa_subsumes(a.name, b.name) && kb.isa_subsumes(b.name, c.name))
          CHECK(kb.isa_subsumes(a.name, c.name));
  }
}

TEST_CASE("isa_subsumes rejects an undefined restriction") {
  CHECK_THROWS_AS(shipped().isa_subsumes("HORSE", "NO-SUCH"), std::exception);
}

TEST_CASE("slots are inherited along isa") {
  const auto& kb = shipped();
  CHECK(kb.slot_restriction("SEE", "INSTRUMENT") == "OPTICAL-INSTRUMENT");
  CHECK(kb.slot_restriction("MAN", "ACCOMPANIMENT") == "PHYSICAL-OBJECT");
  CHECK(kb.slot_restriction("MAN", "ATTRIBUTE") == "QUALITY");
  CHECK_FALSE(kb.slot_restriction("SEE", "LOCATION"));
}

TEST_CASE("preposition senses map attachment category to role") {
  const auto& kb = shipped();
  CHECK(kb.preposition_role("WITH", "VP") == "INSTRUMENT");
  CHECK(kb.preposition_role("WITH", "NP") == "ACCOMPANIMENT");
  CHECK(kb.preposition_role("AT", "RRC") == "LOCATION");
  CHECK_FALSE(kb.preposition_role("WITH", "S"));
}

TEST_CASE("role specialization follows the DAG one way") {
  const auto& kb = shipped();
  CHECK(kb.can_specialize("THING", "ACTOR"));
  CHECK_FALSE(kb.can_specialize("ACTOR", "THING"));
  CHECK_FALSE(kb.can_specialize("ACTOR", "ACTOR"));
  CHECK(kb.primitive_role("N") == "THING");
  CHECK_FALSE(kb.primitive_role("Det"));
}

TEST_CASE("the shipped grammar loads") {
  const auto& kb = shipped();
  CHECK(kb.categories().size() == 12);
  const auto& np = kb.category("NP");
  REQUIRE(np.templates.size() == 2);
  CHECK(np.templates[0].head == 2);
  CHECK(np.templates[1].is_adjunction("NP"));
  CHECK_FALSE(np.templates[0].is_adjunction("NP"));
}

TEST_CASE("tiny knowledge base loads") {
  auto kb = KnowledgeBase::load(kTinyLexicon, kTinyGrammar, kTinyConcepts);
  CHECK(kb.word_count() == 2);
  CHECK(kb.category("S").templates.front().elements.at(0).role == "ACTOR");
}

TEST_CASE("load errors") {
  SUBCASE("empty grammar") {
    CHECK(load_error(kTinyLexicon, "", kTinyConcepts).find("no categories defined") !=
          std::string::npos);
  }
  SUBCASE("isa cycle") {
    std::string conc = std::string(kTinyConcepts) + "(concept A (isa B))\n(concept B (isa A))\n";
    CHECK(load_error(kTinyLexicon, kTinyGrammar, conc.c_str()).find("ISA cycle") !=
          std::string::npos);
  }
  SUBCASE("undefined concept") {
    std::string conc = std::string(kTinyConcepts) + "(concept A (isa NOPE))\n";
    CHECK(load_error(kTinyLexicon, kTinyGrammar, conc.c_str()).find("undefined concept 'NOPE'") !=
          std::string::npos);
  }
  SUBCASE("undefined category in lexicon") {
    CHECK(load_error("(word \"x\" (entry (cat Q) (subcat a) (sense ACT)))", kTinyGrammar,
                     kTinyConcepts)
              .find("undefined category") != std::string::npos);
  }
  SUBCASE("missing head") {
    CHECK_FALSE(load_error(kTinyLexicon, "(category S (template (N) (V)))\n(category N)\n(category V)",
                           kTinyConcepts)
                    .empty());
  }
  SUBCASE("syntax error carries a position") {
    try {
      KnowledgeBase::load(kTinyLexicon, "(category S\n  (template (N)", kTinyConcepts);
      FAIL("expected KbError");
    } catch (const KbError& e) {
      CHECK(e.line() > 0);
      CHECK(std::string(e.what()).rfind("line ", 0) == 0);
    }
  }
}

TEST_CASE("s-expression reader") {
  auto forms = parse_sexprs("(a \"b c\" (d)) ; trailing\n(e)");
  REQUIRE(forms.size() == 2);
  CHECK(forms[0].is_form("a"));
  CHECK(forms[0].items.at(1).is_string());
  CHECK(forms[0].items.at(1).text == "b c");
  CHECK(forms[1].line == 2);
  CHECK_THROWS_AS(parse_sexprs("(a"), KbError);
  CHECK_THROWS_AS(parse_sexprs(")"), KbError);
}
