#include <doctest.h>

#include "cplogic/bayes.hpp"
#include "cplogic/errors.hpp"
#include "cplogic/ground.hpp"
#include "cplogic/parser.hpp"
#include "cplogic/printer.hpp"
#include "testutil.hpp"

using namespace cplogic;
using namespace cplogic::testutil;

namespace {

bool tree_has_zero_edge(const ProcessNode& n) {
  for (const ProcessNode& c : n.children) {
    if (c.incoming_prob == 0 || tree_has_zero_edge(c)) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("sprinkler network parses with exact entries") {
  BayesNet bn = parse_bn(read_file(corpus_path("sprinkler.json")));
  REQUIRE(bn.nodes.size() == 3);
  int wet = bn.node_index("wet");
  REQUIRE(wet >= 0);
  CHECK(bn.nodes[static_cast<std::size_t>(wet)].parents.size() == 2);
  // Row (sprinkler=true, rain=true) is rank 0 in row-major order.
  CHECK(bn.nodes[static_cast<std::size_t>(wet)].cpt[0][0] == make_rational(99, 100));
  CHECK(bn.nodes[0].cpt[0][0] == make_rational(1, 5));
}

TEST_CASE("malformed networks are rejected") {
  auto code_of = [](const std::string& text) {
    try {
      parse_bn(text);
    } catch (const CpError& e) {
      return e.code();
    }
    return Errc::io_error;
  };
  CHECK(code_of(R"({"nodes":[{"name":"a","values":["true","false"],"parents":[],
                  "cpt":[{"given":[],"p":["1/2","2/5"]}]}]})") == Errc::row_sum_not_one);
  CHECK(code_of(R"({"nodes":[{"name":"a","values":["true","false"],"parents":["b"],
                  "cpt":[{"given":["true"],"p":["1/2","1/2"]}],
                  "extra":0},
                 {"name":"b","values":["true","false"],"parents":["a"],
                  "cpt":[{"given":["true"],"p":["1/2","1/2"]},{"given":["false"],"p":["1/2","1/2"]}]}]})") ==
        Errc::cyclic_graph);
  CHECK(code_of(R"({"nodes":[{"name":"a","values":["true","false"],"parents":[],
                  "cpt":[]}]})") == Errc::missing_row);
  // Numeric probabilities would lose exactness; the schema wants strings.
  CHECK(code_of(R"({"nodes":[{"name":"a","values":["true","false"],"parents":[],
                  "cpt":[{"given":[],"p":[0.5,0.5]}]}]})") == Errc::syntax_error);
  CHECK(code_of("{ not json") == Errc::syntax_error);
  CHECK(code_of(R"({"nodes":[{"name":"b","values":["true","false"],"parents":[],
                  "cpt":[{"given":[],"p":["1/2","1/2"]}]},
                 {"name":"a","values":["true","false"],"parents":["b"],
                  "cpt":[{"given":["true"],"p":["1/2","1/2"]}]}]})") == Errc::missing_row);
}

TEST_CASE("the chain-rule joint is exact") {
  BayesNet bn = parse_bn(read_file(corpus_path("sprinkler.json")));
  GroundCPTheory g = ground_theory(bn_to_cp(bn));
  Distribution joint = bn_joint(bn, g);

  CHECK(joint.total() == 1);
  CHECK(joint.prob_of(atom_set(g, {"rain", "sprinkler", "wet"})) == make_rational(99, 1250));

  Rational p_wet = 0;
  AtomId wet = g.atom_by_name("wet");
  for (const auto& [interp, p] : joint.mass)
    if (interp.test(static_cast<std::size_t>(wet))) p_wet += p;
  CHECK(p_wet == make_rational(579, 1250));

  // One-node point-mass network.
  BayesNet unit = parse_bn(
      R"({"nodes":[{"name":"a","values":["true","false"],"parents":[],
          "cpt":[{"given":[],"p":["1","0"]}]}]})");
  GroundCPTheory gu = ground_theory(bn_to_cp(unit));
  Distribution ju = bn_joint(unit, gu);
  CHECK(ju.mass.size() == 1);
  CHECK(ju.prob_of(atom_set(gu, {"a"})) == 1);
}

TEST_CASE("sprinkler translation drops the zero row") {
  BayesNet bn = parse_bn(read_file(corpus_path("sprinkler.json")));
  CPTheory theory = bn_to_cp(bn);
  CHECK(theory.laws.size() == 5);  // the all-zero wet row is omitted
  std::string text = print_theory(theory);
  CHECK(text.find("(wet:99/100) <- sprinkler & rain.") != std::string::npos);
  CHECK(text.find("(sprinkler:1/5).") != std::string::npos);
  CHECK(text.find("(rain:2/5).") != std::string::npos);
}

TEST_CASE("translated networks keep their joint exactly") {
  const char* nets[] = {
      // three-valued node with a boolean parent: 2 rules with 3 disjuncts
      R"({"nodes":[
        {"name":"front","values":["true","false"],"parents":[],
         "cpt":[{"given":[],"p":["3/10","7/10"]}]},
        {"name":"weather","values":["sun","rain","snow"],"parents":["front"],
         "cpt":[{"given":["true"],"p":["1/2","1/4","1/4"]},
                {"given":["false"],"p":["1/5","2/5","2/5"]}]}]})",
      // two parents with mixed domains
      R"({"nodes":[
        {"name":"season","values":["dry","wet"],"parents":[],
         "cpt":[{"given":[],"p":["2/3","1/3"]}]},
        {"name":"wind","values":["true","false"],"parents":[],
         "cpt":[{"given":[],"p":["1/4","3/4"]}]},
        {"name":"fire","values":["true","false"],"parents":["season","wind"],
         "cpt":[{"given":["dry","true"],"p":["1/2","1/2"]},
                {"given":["dry","false"],"p":["1/10","9/10"]},
                {"given":["wet","true"],"p":["1/20","19/20"]},
                {"given":["wet","false"],"p":["0","1"]}]}]})",
  };
  for (const char* net : nets) {
    BayesNet bn = parse_bn(net);
    CPTheory theory = bn_to_cp(bn);
    GroundCPTheory g = ground_theory(theory);
    auto tree = build_execution_model(g, g.empty_atom_set());
    REQUIRE(tree);
    CHECK(leaf_distribution(*tree) == bn_joint(bn, g));
    CHECK(!tree_has_zero_edge(tree->root));
  }

  BayesNet bn = parse_bn(read_file(corpus_path("sprinkler.json")));
  CPTheory theory = bn_to_cp(bn);
  GroundCPTheory g = ground_theory(theory);
  int three_valued_rules = 0;
  for (const CPLaw& law : theory.laws)
    if (law.head.size() == 3) ++three_valued_rules;
  CHECK(three_valued_rules == 0);
  auto tree = build_execution_model(g, g.empty_atom_set());
  REQUIRE(tree);
  CHECK(leaf_distribution(*tree) == bn_joint(bn, g));
  CHECK(!tree_has_zero_edge(tree->root));
}

TEST_CASE("the three-valued translation counts disjuncts per row") {
  BayesNet bn = parse_bn(
      R"({"nodes":[
        {"name":"front","values":["true","false"],"parents":[],
         "cpt":[{"given":[],"p":["3/10","7/10"]}]},
        {"name":"weather","values":["sun","rain","snow"],"parents":["front"],
         "cpt":[{"given":["true"],"p":["1/2","1/4","1/4"]},
                {"given":["false"],"p":["1/5","2/5","2/5"]}]}]})");
  CPTheory theory = bn_to_cp(bn);
  int with_three = 0;
  for (const CPLaw& law : theory.laws)
    if (law.head.size() == 3) ++with_three;
  CHECK(with_three == 2);
}

TEST_CASE("nodes sharing value names get disambiguated constants") {
  BayesNet bn = parse_bn(
      R"({"nodes":[
        {"name":"supply","values":["low","high"],"parents":[],
         "cpt":[{"given":[],"p":["1/3","2/3"]}]},
        {"name":"demand","values":["low","high"],"parents":["supply"],
         "cpt":[{"given":["low"],"p":["1/4","3/4"]},
                {"given":["high"],"p":["1/2","1/2"]}]}]})");
  CPTheory theory = bn_to_cp(bn);
  GroundCPTheory g = ground_theory(theory);
  CHECK(g.atom_by_name("supply(low)") >= 0);
  CHECK(g.atom_by_name("demand(demand_low)") >= 0);
  auto tree = build_execution_model(g, g.empty_atom_set());
  REQUIRE(tree);
  CHECK(leaf_distribution(*tree) == bn_joint(bn, g));

  // The printed translation still parses.
  GroundCPTheory again = ground_theory(parse_theory(print_theory(theory)));
  CHECK(again.rule_count() == g.rule_count());
}

TEST_CASE("noisy-or") {
  CHECK(noisy_or({make_rational(1, 6), make_rational(1, 6)}) == make_rational(11, 36));
  CHECK(noisy_or({}) == 0);
  CHECK(noisy_or({Rational(1), make_rational(3, 7)}) == 1);

  // Independent causes in rule form: the roulette theory.
  GroundCPTheory g = load_corpus("roulette.cpl");
  Distribution d = leaf_distribution(*build_execution_model(g, g.empty_atom_set()));
  Rational p_death = 0;
  AtomId death = g.atom_by_name("death");
  for (const auto& [interp, p] : d.mass)
    if (interp.test(static_cast<std::size_t>(death))) p_death += p;
  CHECK(p_death == make_rational(11, 36));
}
