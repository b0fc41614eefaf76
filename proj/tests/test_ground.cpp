#include <doctest.h>

#include <algorithm>
#include <functional>
#include <random>

#include "cplogic/errors.hpp"
#include "cplogic/ground.hpp"
#include "cplogic/parser.hpp"
#include "cplogic/printer.hpp"
#include "testutil.hpp"

using namespace cplogic;
using namespace cplogic::testutil;

TEST_CASE("universal laws expand once per constant") {
  CPTheory t = parse_theory(
      "pred angina/1. pred pneumonia/1. const john, mary.\n"
      "!x (angina(x):0.2) <- pneumonia(x).");
  GroundCPTheory g = ground_theory(t);
  REQUIRE(g.rule_count() == 2);
  CHECK(g.atom_name(g.rules()[0].head[0].atom) == "angina(john)");
  CHECK(g.atom_name(g.rules()[1].head[0].atom) == "angina(mary)");
  CHECK(g.rules()[0].origin == 0);
  CHECK(g.rules()[1].origin == 0);
}

TEST_CASE("out-of-range arithmetic drops the instantiation") {
  GroundCPTheory g = load_corpus("hospital_days.cpl");
  // pneumonia(1); pneumonia(d+1) for d=1,2 (d=3 leaves the range); chestpain
  // for d=1,2,3.
  CHECK(g.rule_count() == 6);
  int persist = 0;
  for (const GroundCPLaw& r : g.rules())
    if (r.origin == 1) ++persist;
  CHECK(persist == 2);
}

TEST_CASE("grounding a ground theory is the identity on rules") {
  GroundCPTheory g = load_corpus("window.cpl");
  REQUIRE(g.rule_count() == 4);
  for (std::size_t i = 0; i < g.rule_count(); ++i) {
    CHECK(g.rules()[i].id == static_cast<RuleId>(i));
    CHECK(g.rules()[i].origin == static_cast<int>(i));
  }
  // Reparse the printed ground form; the rule set must be unchanged.
  std::string decls = "pred break/0. pred throws/1. const mary, john.\n";
  CPTheory reparsed = parse_theory(decls + print_ground(g));
  GroundCPTheory g2 = ground_theory(reparsed);
  REQUIRE(g2.rule_count() == g.rule_count());
  for (std::size_t i = 0; i < g.rule_count(); ++i) {
    CHECK(g2.rules()[i].head.size() == g.rules()[i].head.size());
    CHECK(g2.rules()[i].head[0].atom == g.rules()[i].head[0].atom);
    CHECK(g2.rules()[i].head[0].prob == g.rules()[i].head[0].prob);
  }
}

TEST_CASE("herbrand base is ordered and dense") {
  GroundCPTheory g = load_corpus("window.cpl");
  REQUIRE(g.atom_count() == 3);
  CHECK(g.atom_name(0) == "break");
  CHECK(g.atom_name(1) == "throws(mary)");  // constants in declaration order
  CHECK(g.atom_name(2) == "throws(john)");
  for (std::size_t i = 0; i < g.atom_count(); ++i)
    CHECK(g.atoms()[i].id == static_cast<AtomId>(i));
  CHECK(g.atom_by_name("throws(john)") == 2);
  CHECK(g.atom_by_name("throws(bob)") == -1);
}

TEST_CASE("body atom sets follow the polarity induction") {
  CPTheory t = parse_theory(
      "pred fever/0. pred treatment/0. pred pneumonia/0.\n"
      "pred p/0.\n"
      "pred next_to/2. pred pit/1. pred breeze/1. const a, b.\n"
      "(fever:0.7) <- pneumonia & ~treatment.\n"
      "p <- ~(~p).\n"
      "(breeze(a):0.9) <- ?y (next_to(a,y) & pit(y)).\n");
  GroundCPTheory g = ground_theory(t);

  BodyAtomSets s0 = body_atom_sets(g, g.rules()[0]);
  CHECK(s0.all == std::vector<AtomId>{g.atom_by_name("pneumonia"), g.atom_by_name("treatment")});
  CHECK(s0.positive == std::vector<AtomId>{g.atom_by_name("pneumonia")});
  CHECK(s0.negative == std::vector<AtomId>{g.atom_by_name("treatment")});

  BodyAtomSets s1 = body_atom_sets(g, g.rules()[1]);
  CHECK(s1.positive == std::vector<AtomId>{g.atom_by_name("p")});
  CHECK(s1.negative.empty());

  BodyAtomSets s2 = body_atom_sets(g, g.rules()[2]);
  CHECK(s2.all.size() == 4);  // next_to(a,a), next_to(a,b), pit(a), pit(b)
  CHECK(s2.negative.empty());
  CHECK(s2.positive.size() == 4);

  GroundCPLaw unconditional;
  BodyAtomSets s3 = body_atom_sets(g, unconditional);
  CHECK(s3.all.empty());
}

TEST_CASE("negative atoms are exactly the odd-parity occurrences") {
  std::mt19937_64 rng(7);
  const char* names[] = {"a", "b", "c"};

  for (int round = 0; round < 200; ++round) {
    // Random formula tree plus an independent parity walk as the oracle.
    std::vector<char> neg(3, 0), all(3, 0);
    std::function<std::string(int, bool)> gen = [&](int depth, bool parity) -> std::string {
      int k = static_cast<int>(rng() % (depth > 0 ? 4u : 1u));
      if (k == 0) {
        int a = static_cast<int>(rng() % 3);
        all[static_cast<std::size_t>(a)] = 1;
        if (parity) neg[static_cast<std::size_t>(a)] = 1;
        return names[a];
      }
      if (k == 1) return "~(" + gen(depth - 1, !parity) + ")";
      const char* op = (k == 2) ? " & " : " | ";
      return "(" + gen(depth - 1, parity) + op + gen(depth - 1, parity) + ")";
    };
    std::string body = gen(3, false);
    CPTheory theory = parse_theory("pred a/0. pred b/0. pred c/0. pred h/0. h <- " + body + ".");
    GroundCPTheory g = ground_theory(theory);
    BodyAtomSets sets = body_atom_sets(g, g.rules()[0]);

    for (int a = 0; a < 3; ++a) {
      AtomId id = g.atom_by_name(names[a]);
      bool in_all = std::find(sets.all.begin(), sets.all.end(), id) != sets.all.end();
      bool in_neg = std::find(sets.negative.begin(), sets.negative.end(), id) != sets.negative.end();
      bool in_pos = std::find(sets.positive.begin(), sets.positive.end(), id) != sets.positive.end();
      CHECK(in_all == static_cast<bool>(all[static_cast<std::size_t>(a)]));
      CHECK(in_neg == static_cast<bool>(neg[static_cast<std::size_t>(a)]));
      CHECK(in_pos == (in_all && !in_neg));
    }
  }
}

TEST_CASE("instance count is bounded by candidates^variables") {
  CPTheory t = parse_theory(
      "pred r/2. pred s/1. const a, b, c.\n"
      "!x !y (r(x,y):0.5) <- s(x) & s(y).");
  GroundCPTheory g = ground_theory(t);
  CHECK(g.rule_count() == 9);
}

TEST_CASE("grounding errors carry their codes") {
  try {
    ground_theory(parse_theory("pred p/1. !x (p(x):0.5)."));
    FAIL("expected DomainEmpty");
  } catch (const CpError& e) {
    CHECK(e.code() == Errc::domain_empty);
  }
  try {
    ground_theory(parse_theory("pred p/1. const c. p(c+1)."));
    FAIL("expected ArithmeticOnNonInteger");
  } catch (const CpError& e) {
    CHECK(e.code() == Errc::arithmetic_on_non_integer);
  }
}

TEST_CASE("out-of-base body mentions also drop the instance") {
  GroundCPTheory g = load_corpus("messages.cpl");
  // The repeat-request law at the last slot mentions recvs(...,3) in its head
  // counterpart send(...,3): only t=1 survives.
  int persist = 0;
  for (const GroundCPLaw& r : g.rules())
    if (r.origin == 4) ++persist;
  CHECK(persist == 1);
  // Delivery law: 8 combinations at t=1; t=2 drops via recvs(.,.,3).
  int deliveries = 0;
  for (const GroundCPLaw& r : g.rules())
    if (r.origin == 3) ++deliveries;
  CHECK(deliveries == 8);
}
