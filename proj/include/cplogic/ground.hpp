#pragma once

#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cplogic/ast.hpp"
#include "cplogic/bitset.hpp"

namespace cplogic {

struct GroundAtom {
  PredId pred = -1;
  std::vector<ConstId> args;
  AtomId id = -1;
};

struct GroundHead {
  AtomId atom = -1;
  Rational prob;
};

struct GroundCPLaw {
  std::vector<GroundHead> head;
  FormulaPtr body;  // null = unconditional; otherwise ground (only quantifier-bound variables)
  RuleId id = -1;
  int origin = -1;  // source_index of the non-ground law
  Rational head_mass;
};

// Variable bindings used when expanding quantifiers during evaluation.
using Env = std::vector<std::pair<std::string, ConstId>>;

// A CPTheory expanded over its Herbrand base.  Immutable after construction.
class GroundCPTheory {
 public:
  const Vocabulary& vocab() const { return vocab_; }
  const std::vector<GroundAtom>& atoms() const { return atoms_; }
  const std::vector<GroundCPLaw>& rules() const { return rules_; }
  std::size_t atom_count() const { return atoms_.size(); }
  std::size_t rule_count() const { return rules_.size(); }

  AtomId find_atom(PredId pred, const std::vector<ConstId>& args) const;
  std::string atom_name(AtomId id) const;
  AtomId atom_by_name(const std::string& name) const;  // "p(a,b)" form; -1 if absent

  const Bitset& exogenous_atoms() const { return exogenous_; }
  const Bitset& endogenous_atoms() const { return endogenous_; }

  Bitset empty_atom_set() const { return Bitset(atoms_.size()); }
  Bitset empty_rule_set() const { return Bitset(rules_.size()); }

  // Renders a true-atom set as "{a,b(c)}" in atom-id order.
  std::string set_name(const Bitset& atoms) const;

  friend GroundCPTheory ground_theory(const CPTheory& theory);

 private:
  std::string atom_key(PredId pred, const std::vector<ConstId>& args) const;

  Vocabulary vocab_;
  std::vector<GroundAtom> atoms_;
  std::vector<GroundCPLaw> rules_;
  std::unordered_map<std::string, AtomId> index_;
  Bitset exogenous_, endogenous_;
};

GroundCPTheory ground_theory(const CPTheory& theory);

// Resolves an atom occurrence under env.  Returns the atom id, or -1 when a
// fully resolved argument falls outside the Herbrand base, or -2 when some
// variable is still unbound.
AtomId resolve_atom(const GroundCPTheory& theory, PredId pred, const std::vector<TermPtr>& args,
                    const Env& env);

// Two-valued builtin comparisons over ground terms.
bool eval_compare(const Vocabulary& vocab, CompareRel rel, const TermPtr& lhs, const TermPtr& rhs,
                  const Env& env);

struct BodyAtomSets {
  std::vector<AtomId> all;
  std::vector<AtomId> positive;  // At(body) \ At-(body)
  std::vector<AtomId> negative;  // At-(body)
};

BodyAtomSets body_atom_sets(const GroundCPTheory& theory, const GroundCPLaw& rule);

// Renders the grounded theory in .cpl syntax with rule ids as comments.
std::string print_ground(const GroundCPTheory& theory);

}  // namespace cplogic
