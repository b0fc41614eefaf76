#include <doctest.h>

#include <random>

#include "cplogic/errors.hpp"
#include "cplogic/parser.hpp"
#include "cplogic/process.hpp"
#include "testutil.hpp"

using namespace cplogic;
using namespace cplogic::testutil;

namespace {

// All interpretations obtainable from the state by lifting false atoms to
// unknown while every non-false-bodied unfired rule keeps non-false heads;
// brute force over the f/u assignments (tiny bases only).
std::vector<Interpretation> closure_family(const GroundCPTheory& g, const Bitset& fired,
                                           const Bitset& state) {
  std::vector<AtomId> free_atoms;
  for (std::size_t i = 0; i < g.atom_count(); ++i)
    if (!state.test(i)) free_atoms.push_back(static_cast<AtomId>(i));
  REQUIRE(free_atoms.size() <= 12);

  std::vector<Interpretation> family;
  for (std::size_t mask = 0; mask < (std::size_t{1} << free_atoms.size()); ++mask) {
    Interpretation nu = Interpretation::from_true_set(state);
    for (std::size_t i = 0; i < free_atoms.size(); ++i)
      if ((mask >> i) & 1) nu.set(free_atoms[i], TruthValue::u);
    bool closed = true;
    for (const GroundCPLaw& rule : g.rules()) {
      if (fired.test(static_cast<std::size_t>(rule.id))) continue;
      if (eval3(g, rule.body, nu) == TruthValue::f) continue;
      for (const GroundHead& h : rule.head)
        if (nu[h.atom] == TruthValue::f) closed = false;
    }
    if (closed) family.push_back(std::move(nu));
  }
  return family;
}

int count_nodes(const ProcessNode& n) {
  int total = 1;
  for (const ProcessNode& c : n.children) total += count_nodes(c);
  return total;
}

bool has_vacuous_firing(const GroundCPTheory& g, const ProcessNode& n) {
  if (n.event) {
    bool all_true = true;
    for (const GroundHead& h : g.rules()[static_cast<std::size_t>(*n.event)].head)
      all_true &= n.interp.test(static_cast<std::size_t>(h.atom));
    if (all_true) return true;
  }
  for (const ProcessNode& c : n.children)
    if (has_vacuous_firing(g, c)) return true;
  return false;
}

}  // namespace

TEST_CASE("potential lifts still-derivable atoms to unknown") {
  GroundCPTheory g = load_corpus("fever_treatment.cpl");
  Bitset state = atom_set(g, {"pneumonia"});

  Interpretation nu = potential(g, g.empty_rule_set(), state);
  CHECK(nu[g.atom_by_name("pneumonia")] == TruthValue::t);
  CHECK(nu[g.atom_by_name("treatment")] == TruthValue::u);
  CHECK(nu[g.atom_by_name("fever")] == TruthValue::u);

  // After the treatment event resolved to the empty outcome, fever is still
  // open but treatment is settled false.
  Bitset fired = g.empty_rule_set();
  fired.set(1);
  Interpretation nu2 = potential(g, fired, state);
  CHECK(nu2[g.atom_by_name("treatment")] == TruthValue::f);
  CHECK(nu2[g.atom_by_name("fever")] == TruthValue::u);

  // With every rule fired nothing is derivable.
  fired.set(0);
  Interpretation nu3 = potential(g, fired, state);
  CHECK(nu3[g.atom_by_name("treatment")] == TruthValue::f);
  CHECK(nu3[g.atom_by_name("fever")] == TruthValue::f);
}

TEST_CASE("potential is the most precise member of the closure family") {
  std::mt19937_64 rng(31);
  GroundCPTheory g1 = load_corpus("fever_treatment.cpl");
  GroundCPTheory g2 = load_corpus("pneumonia.cpl");
  for (const GroundCPTheory* g : {&g1, &g2}) {
    for (int round = 0; round < 20; ++round) {
      Bitset state = g->empty_atom_set();
      for (std::size_t i = 0; i < g->atom_count(); ++i)
        if (rng() % 3 == 0) state.set(i);
      Bitset fired = g->empty_rule_set();
      for (std::size_t i = 0; i < g->rule_count(); ++i)
        if (rng() & 1) fired.set(i);

      Interpretation nu_s = potential(*g, fired, state);
      std::vector<Interpretation> family = closure_family(*g, fired, state);
      bool member = false;
      for (const Interpretation& nu : family) {
        CHECK(compare(nu, nu_s, OrderKind::precision) == CmpResult::less_or_equal);
        member |= nu == nu_s;
      }
      CHECK(member);
    }
  }
}

TEST_CASE("randomized derivation schedules reach the same limit") {
  std::mt19937_64 rng(37);
  for (int round = 0; round < 100; ++round) {
    CPTheory theory = random_stratified_theory(rng);
    GroundCPTheory g = ground_theory(theory);
    Bitset state = g.empty_atom_set(), fired = g.empty_rule_set();
    for (std::size_t i = 0; i < g.atom_count(); ++i)
      if (rng() & 1) state.set(i);
    for (std::size_t i = 0; i < g.rule_count(); ++i)
      if (rng() % 3 == 0) fired.set(i);
    Interpretation det = potential(g, fired, state);
    for (int k = 0; k < 2; ++k) CHECK(randomized_potential(g, fired, state, rng) == det);
  }
}

TEST_CASE("eligibility gates on the potential") {
  GroundCPTheory fever = load_corpus("fever_treatment.cpl");
  Bitset state = atom_set(fever, {"pneumonia"});
  CHECK(eligible(fever, fever.empty_rule_set(), state) == std::vector<RuleId>{1});

  GroundCPTheory game = load_corpus("win_game.cpl");
  CHECK(eligible(game, game.empty_rule_set(), game.empty_atom_set()).empty());

  GroundCPTheory pneu = load_corpus("pneumonia.cpl");
  CHECK(eligible(pneu, pneu.empty_rule_set(), atom_set(pneu, {"infection"})) ==
        std::vector<RuleId>{2});
}

TEST_CASE("window story distributions") {
  GroundCPTheory g = load_corpus("window.cpl");
  auto tree = build_execution_model(g, g.empty_atom_set());
  REQUIRE(tree);
  Distribution d = leaf_distribution(*tree);
  CHECK(d.total() == 1);

  Rational p_break = 0;
  AtomId brk = g.atom_by_name("break");
  for (const auto& [interp, p] : d.mass)
    if (interp.test(static_cast<std::size_t>(brk))) p_break += p;
  CHECK(p_break == make_rational(19, 25));

  // Both seeded and deterministic policies agree exactly.
  for (uint64_t seed : {1ull, 2ull, 99ull}) {
    auto t2 = build_execution_model(g, g.empty_atom_set(),
                                    Policy{Policy::Kind::seeded_random, seed});
    REQUIRE(t2);
    CHECK(leaf_distribution(*t2) == d);
  }

  // A rule whose head is already true still fires once per branch.
  CHECK(has_vacuous_firing(g, tree->root));
}

TEST_CASE("pneumonia distribution in the infection context") {
  GroundCPTheory g = load_corpus("pneumonia.cpl");
  Bitset ctx = atom_set(g, {"infection"});
  auto tree = build_execution_model(g, ctx);
  REQUIRE(tree);
  Distribution d = leaf_distribution(*tree);
  CHECK(d.prob_of(atom_set(g, {"infection", "pneumonia", "angina"})) == make_rational(11, 100));
  CHECK(d.prob_of(atom_set(g, {"infection", "pneumonia"})) == make_rational(8, 25));
  CHECK(d.prob_of(atom_set(g, {"infection", "angina"})) == make_rational(7, 100));
  CHECK(d.prob_of(atom_set(g, {"infection"})) == make_rational(1, 2));
  CHECK(d.mass.size() == 4);
}

TEST_CASE("invalid theories have no execution model") {
  GroundCPTheory game = load_corpus("win_game.cpl");
  CHECK(!build_execution_model(game, game.empty_atom_set()));
  GroundCPTheory loop = load_corpus("choice_loop.cpl");
  CHECK(!build_execution_model(loop, loop.empty_atom_set()));
}

TEST_CASE("an empty endogenous theory yields a point mass on the context") {
  GroundCPTheory g = ground_theory(parse_theory("pred e/0 exogenous. pred p/0."));
  Bitset ctx = atom_set(g, {"e"});
  auto tree = build_execution_model(g, ctx);
  REQUIRE(tree);
  CHECK(count_nodes(tree->root) == 1);
  Distribution d = leaf_distribution(*tree);
  CHECK(d.mass.size() == 1);
  CHECK(d.prob_of(ctx) == 1);
}

TEST_CASE("checker accepts full-mode trees and classifies weak ones") {
  GroundCPTheory g = load_corpus("fever_treatment.cpl");
  Bitset ctx = atom_set(g, {"pneumonia"});

  auto full_tree = build_execution_model(g, ctx, Policy{}, ProcessMode::full);
  REQUIRE(full_tree);
  CHECK(check_execution_model(g, *full_tree, ctx, ProcessMode::full).ok);
  CHECK(check_execution_model(g, *full_tree, ctx, ProcessMode::weak).ok);
  CHECK(full_tree->root.event == 1);  // treatment settles first

  // First-eligible weak construction fires the fever law first.
  auto weak_tree = build_execution_model(g, ctx, Policy{}, ProcessMode::weak);
  REQUIRE(weak_tree);
  CHECK(weak_tree->root.event == 0);
  CHECK(check_execution_model(g, *weak_tree, ctx, ProcessMode::weak).ok);
  CheckResult rejected = check_execution_model(g, *weak_tree, ctx, ProcessMode::full);
  CHECK(!rejected.ok);
  CHECK(rejected.path.empty());  // the violation is at the root

  // The two weak orderings genuinely disagree, which is the ambiguity the
  // full mode removes.
  CHECK(!(leaf_distribution(*weak_tree) == leaf_distribution(*full_tree)));

  // Tampered probabilities are rejected in both modes.
  ExecutionTree bad = *full_tree;
  bad.root.children[0].incoming_prob = make_rational(1, 2);
  CHECK(!check_execution_model(g, bad, ctx, ProcessMode::weak).ok);
  CHECK(!check_execution_model(g, bad, ctx, ProcessMode::full).ok);
}

TEST_CASE("full-mode distribution is the treatment-first one") {
  GroundCPTheory g = load_corpus("fever_treatment.cpl");
  Bitset ctx = atom_set(g, {"pneumonia"});
  Distribution d = leaf_distribution(*build_execution_model(g, ctx));
  CHECK(d.prob_of(atom_set(g, {"pneumonia", "treatment"})) == make_rational(19, 20));
  CHECK(d.prob_of(atom_set(g, {"pneumonia", "fever"})) == make_rational(7, 200));
  CHECK(d.prob_of(atom_set(g, {"pneumonia"})) == make_rational(3, 200));
}

TEST_CASE("enumerate-all yields every ordering with one distribution") {
  GroundCPTheory g = load_corpus("window.cpl");
  std::vector<Distribution> dists;
  std::vector<RuleId> root_events;
  for_each_execution_model(g, g.empty_atom_set(), ProcessMode::full, [&](const ExecutionTree& t) {
    dists.push_back(leaf_distribution(t));
    root_events.push_back(*t.root.event);
    return true;
  });
  REQUIRE(dists.size() >= 2);
  for (const Distribution& d : dists) CHECK(d == dists[0]);
  CHECK(std::count(root_events.begin(), root_events.end(), 2) > 0);  // Mary decides first
  CHECK(std::count(root_events.begin(), root_events.end(), 3) > 0);  // John throws first
}

TEST_CASE("positive theories: weak and full execution models coincide") {
  for (const char* name : {"window.cpl", "pneumonia.cpl", "hospital_days.cpl"}) {
    GroundCPTheory g = load_corpus(name);
    Bitset ctx = g.empty_atom_set();
    if (g.atom_by_name("infection") >= 0 && g.exogenous_atoms().count() > 0)
      ctx = atom_set(g, {"infection"});
    std::size_t weak_count = 0, full_count = 0;
    for_each_execution_model(g, ctx, ProcessMode::weak, [&](const ExecutionTree& t) {
      ++weak_count;
      CHECK(check_execution_model(g, t, ctx, ProcessMode::full).ok);
      return true;
    });
    for_each_execution_model(g, ctx, ProcessMode::full, [&](const ExecutionTree&) {
      ++full_count;
      return true;
    });
    CHECK(weak_count == full_count);
    CHECK(weak_count > 0);
  }
}

TEST_CASE("causal loops propagate only from external causes") {
  GroundCPTheory g = load_corpus("causal_loop.cpl");
  auto prob = [&](const std::vector<std::string>& ctx_atoms, const char* formula) {
    Bitset ctx = atom_set(g, ctx_atoms);
    Distribution d = leaf_distribution(*build_execution_model(g, ctx));
    FormulaPtr f = parse_formula(formula, g.vocab());
    Rational p = 0;
    for (const auto& [interp, mass] : d.mass)
      if (eval_classical(g, f, interp)) p += mass;
    return p;
  };
  // No external cause: neither disease appears.
  CHECK(prob({}, "~angina & ~pneumonia") == 1);
  // One external cause feeds the loop once; the loop does not bootstrap.
  CHECK(prob({"ext_angina"}, "pneumonia") == make_rational(3, 10));
  CHECK(prob({"ext_pneumonia"}, "angina") == make_rational(1, 5));
  CHECK(prob({"ext_angina", "ext_pneumonia"}, "angina & pneumonia") == 1);
}

TEST_CASE("policies and seeds cannot change the distribution of a valid theory") {
  GroundCPTheory g = load_corpus("master_slave.cpl");
  Bitset ctx = atom_set(g, {"application(a)"});
  Distribution reference = leaf_distribution(*build_execution_model(g, ctx));
  for (uint64_t seed : {7ull, 8ull, 9ull}) {
    auto t = build_execution_model(g, ctx, Policy{Policy::Kind::seeded_random, seed});
    REQUIRE(t);
    CHECK(leaf_distribution(*t) == reference);
  }
}

TEST_CASE("conditional semantics weights contexts by the prior") {
  GroundCPTheory g = load_corpus("paresis.cpl");
  Bitset syph = atom_set(g, {"syphilis"});
  Bitset none = g.empty_atom_set();

  Distribution joint = conditional_semantics(
      g, {{syph, make_rational(1, 3)}, {none, make_rational(2, 3)}});
  CHECK(joint.total() == 1);
  CHECK(joint.prob_of(atom_set(g, {"syphilis", "paresis"})) == make_rational(1, 12));
  CHECK(joint.prob_of(syph) == make_rational(1, 4));
  CHECK(joint.prob_of(none) == make_rational(2, 3));

  CHECK_THROWS_AS(conditional_semantics(g, {{syph, make_rational(1, 3)}}), CpError);

  // A point-mass prior reproduces the per-context distribution.
  GroundCPTheory pneu = load_corpus("pneumonia.cpl");
  Bitset inf = atom_set(pneu, {"infection"});
  Distribution point = conditional_semantics(pneu, {{inf, Rational(1)}});
  CHECK(point == leaf_distribution(*build_execution_model(pneu, inf)));

  // With no endogenous rules the joint equals the prior.
  GroundCPTheory empty = ground_theory(parse_theory("pred e/0 exogenous."));
  Bitset on = atom_set(empty, {"e"});
  Distribution prior_only =
      conditional_semantics(empty, {{on, make_rational(2, 5)}, {empty.empty_atom_set(), make_rational(3, 5)}});
  CHECK(prior_only.prob_of(on) == make_rational(2, 5));
  CHECK(prior_only.prob_of(empty.empty_atom_set()) == make_rational(3, 5));
}

TEST_CASE("resource caps trigger ResourceLimit") {
  GroundCPTheory g = load_corpus("window.cpl");
  BuildLimits limits;
  limits.node_cap = 3;
  CHECK_THROWS_AS(build_execution_model(g, g.empty_atom_set(), Policy{}, ProcessMode::full, limits),
                  CpError);
}

TEST_CASE("tree exports name states and probabilities") {
  GroundCPTheory g = load_corpus("paresis.cpl");
  Bitset ctx = atom_set(g, {"syphilis"});
  auto tree = build_execution_model(g, ctx);
  REQUIRE(tree);
  std::string dot = tree_to_dot(g, *tree);
  CHECK(dot.find("digraph") != std::string::npos);
  CHECK(dot.find("{paresis,syphilis}") != std::string::npos);
  CHECK(dot.find("1/4") != std::string::npos);
  std::string json = tree_to_json(g, *tree);
  CHECK(json.find("\"prob\":\"1/4\"") != std::string::npos);
  CHECK(json.find("\"event\":0") != std::string::npos);
}
