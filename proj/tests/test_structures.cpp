#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <deque>
#include <random>

#include "reparse/structures.hpp"

using namespace reparse;

namespace {

const KnowledgeBase& kb() {
  static const KnowledgeBase k = KnowledgeBase::load_dir(REPARSE_KB_DIR);
  return k;
}

NodeId leaf(ParseState& s, const char* word, std::size_t token, std::size_t entry = 0) {
  return s.make_leaf(kb().lexical_access(word, token).at(entry), token, entry);
}

// "the man saw the horse" assembled by hand.
struct Text1 {
  ParseState s{kb()};
  NodeId S, subj, vp, obj, verb;

  Text1() {
    S = s.make_phrasal("S", 0);
    subj = s.make_phrasal("NP", 0);
    s.attach(leaf(s, "the", 0), subj, 0);
    s.attach(leaf(s, "man", 1), subj, 2);
    s.attach(subj, S, 0);
    vp = s.make_phrasal("VP", 0);
    verb = leaf(s, "saw", 2);
    s.attach(verb, vp, 0);
    s.attach(vp, S, 1);
    obj = s.make_phrasal("NP", 0);
    s.attach(leaf(s, "the", 3), obj, 0);
    s.attach(leaf(s, "horse", 4), obj, 2);
    s.attach(obj, vp, 1);
  }
};

}  // namespace

TEST_CASE("attach builds contiguous spans") {
  Text1 t;
  CHECK(t.s.node(t.S).span == Span{0, 5});
  CHECK(t.s.node(t.vp).span == Span{2, 5});
  CHECK(t.s.complete(t.S));
  CHECK(t.s.subtree_complete(t.S));
  CHECK(t.s.counters().attachments == 8);
  CHECK(t.s.counters().node_constructions == 9);
  CHECK_NOTHROW(t.s.check_well_formed());
}

TEST_CASE("attach rejects ill-formed sites") {
  ParseState s(kb());
  NodeId np = s.make_phrasal("NP", 0);
  NodeId man = leaf(s, "man", 1);
  NodeId the = leaf(s, "the", 0);

  SUBCASE("category mismatch") { CHECK_THROWS_AS(s.attach(man, np, 0), StructureError); }
  SUBCASE("position out of range") { CHECK_THROWS_AS(s.attach(man, np, 9), StructureError); }
  SUBCASE("under a lexical node") { CHECK_THROWS_AS(s.attach(man, the, 0), StructureError); }
  SUBCASE("feature mismatch") {
    NodeId vp = s.make_phrasal("VP", 0);
    NodeId participle = leaf(s, "taught", 2, 1);
    CHECK_THROWS_WITH_AS(s.attach(participle, vp, 0), doctest::Contains("feature mismatch"),
                         StructureError);
  }
  SUBCASE("skipping an obligatory position") {
    s.attach(the, np, 0);
    s.attach(man, np, 2);
    NodeId vp = s.make_phrasal("VP", 0);
    CHECK_THROWS_WITH_AS(s.attach(np, vp, 1), doctest::Contains("obligatory"), StructureError);
  }
  SUBCASE("twice") {
    s.attach(the, np, 0);
    NodeId other = s.make_phrasal("NP", 0);
    CHECK_THROWS_AS(s.attach(the, other, 0), StructureError);
  }
  SUBCASE("span gap") {
    s.attach(the, np, 0);
    NodeId horse = leaf(s, "horse", 4);
    CHECK_THROWS_WITH_AS(s.attach(horse, np, 2), doctest::Contains("discontiguity"),
                         StructureError);
  }
}

TEST_CASE("detach leaves a well-formed state and re-attach restores it") {
  Text1 t;
  Span before = t.s.node(t.S).span;
  t.s.detach(t.obj);
  CHECK_NOTHROW(t.s.check_well_formed());
  CHECK(t.s.node(t.S).span == Span{0, 3});
  CHECK_FALSE(t.s.node(t.obj).parent);
  CHECK(t.s.counters().detachments == 1);
  t.s.attach(t.obj, t.vp, 1);
  CHECK(t.s.node(t.S).span == before);
  CHECK_NOTHROW(t.s.check_well_formed());

  // Every right-frontier node round-trips.
  for (NodeId n : t.s.right_frontier(t.S)) {
    if (!t.s.node(n).parent) continue;
    ParseState copy = t.s;
    NodeId parent = *copy.node(n).parent;
    std::size_t pos = copy.node(n).position;
    copy.detach(n);
    CHECK_NOTHROW(copy.check_well_formed());
    copy.attach(n, parent, pos);
    CHECK(copy.node(t.S).span == t.s.node(t.S).span);
  }
}

TEST_CASE("detach refuses roots and mid-sequence children") {
  Text1 t;
  CHECK_THROWS_AS(t.s.detach(t.S), StructureError);
  CHECK_THROWS_WITH_AS(t.s.detach(t.subj), doctest::Contains("contiguity"), StructureError);
}

TEST_CASE("a copied state is independent") {
  Text1 t;
  ParseState copy = t.s;
  copy.detach(t.obj);
  CHECK(t.s.node(t.obj).parent == t.vp);
  CHECK(t.s.node(t.S).span == Span{0, 5});
}

TEST_CASE("role specialization is monotone") {
  ParseState s(kb());
  MeaningId m = s.make_meaning("MAN", 1);
  CHECK(s.meaning(m).tag == "MAN1");
  CHECK(s.meaning(s.make_meaning("MAN", 4)).tag == "MAN2");
  RoleId r = s.make_role("THING", m);
  s.specialize_role(r, "ACTOR");
  CHECK(s.role(r).label == "ACTOR");
  CHECK(s.role(r).history == std::vector<std::string>{"THING"});
  CHECK_THROWS_WITH_AS(s.specialize_role(r, "THING"),
                       doctest::Contains("illegal role specialization ACTOR -> THING"),
                       StructureError);
  CHECK_THROWS_AS(s.make_role("NOT-A-ROLE", m), StructureError);
}

TEST_CASE("reactivate prefers recent viable alternatives") {
  ParseState s(kb());
  auto make = [](NodeId child, AltStatus st) {
    Alternative a;
    a.child = child;
    a.status = st;
    return a;
  };
  s.retain(make(1, AltStatus::Violating));
  s.retain(make(2, AltStatus::Viable));
  s.retain(make(3, AltStatus::Viable));
  s.retain(make(4, AltStatus::Violating));
  auto any = [](const Alternative&) { return true; };
  CHECK(s.reactivate(any)->child == 3);
  CHECK(s.reactivate(any)->child == 2);
  CHECK(s.reactivate(any)->child == 4);
  CHECK(s.reactivate(any)->child == 1);
  CHECK_FALSE(s.reactivate(any));
}

TEST_CASE("capacity evicts oldest first; retained_peak matches a shadow count") {
  std::mt19937 rng(11);
  for (int round = 0; round < 100; ++round) {
    ParseState s(kb());
    std::optional<std::size_t> cap;
    if (rng() % 3) cap = rng() % 4;
    std::deque<NodeId> shadow;
    std::size_t peak = 0;
    for (int op = 0; op < 30; ++op) {
      if (rng() % 4) {
        Alternative a;
        a.child = static_cast<NodeId>(op);
        s.retain(a, cap);
        shadow.push_back(a.child);
        while (cap && shadow.size() > *cap) shadow.pop_front();
      } else {
        auto got = s.reactivate([](const Alternative&) { return true; });
        if (shadow.empty()) {
          CHECK_FALSE(got);
        } else {
          REQUIRE(got);
          CHECK(got->child == shadow.back());
          shadow.pop_back();
        }
      }
      peak = std::max(peak, shadow.size());
      CHECK(s.store_size() == shadow.size());
    }
    CHECK(s.counters().retained_peak == peak);
  }
}

TEST_CASE("capacity zero retains nothing") {
  ParseState s(kb());
  CHECK_FALSE(s.retain(Alternative{}, 0));
  CHECK(s.store_size() == 0);
  CHECK(s.counters().retained_peak == 0);
}

TEST_CASE("preference order is lexicographic") {
  PreferenceVector ok{SemClass::Ok, false, 5, 3};
  PreferenceVector bad{SemClass::Violation, true, 0, 0};
  PreferenceVector unknown{SemClass::Unknown, true, 0, 0};
  CHECK(preferred(ok, bad));
  CHECK(preferred(unknown, bad));
  CHECK(preferred(ok, unknown));
  PreferenceVector exp{SemClass::Ok, true, 9, 9};
  CHECK(preferred(exp, ok));
  PreferenceVector recent{SemClass::Ok, false, 1, 9};
  CHECK(preferred(recent, ok));
  PreferenceVector low_tmpl{SemClass::Ok, false, 5, 0};
  CHECK(preferred(low_tmpl, ok));
  CHECK_FALSE(preferred(ok, ok));
}
