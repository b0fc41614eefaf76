#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cplogic/rational.hpp"

namespace cplogic {

using PredId = int;
using ConstId = int;
using AtomId = int;
using RuleId = int;

struct PredDecl {
  std::string name;
  int arity = 0;
  bool exogenous = false;
  // Empty, or one sort name per argument ("" = untyped argument).
  std::vector<std::string> arg_sorts;
};

struct ConstDecl {
  std::string name;  // decimal rendering for integer constants
  std::string sort;  // "" = untyped
  bool is_int = false;
  long int_value = 0;
};

struct RangeDecl {
  std::string name;
  long lo = 0;
  long hi = 0;
};

// Finite relational vocabulary.  Predicate symbols are (name, arity) pairs;
// constants are kept in declaration order, which fixes the grounding order.
class Vocabulary {
 public:
  PredId add_predicate(PredDecl decl);
  ConstId add_constant(const std::string& name, const std::string& sort);
  ConstId add_int_constant(long value);
  void add_range(const std::string& name, long lo, long hi);

  PredId find_predicate(const std::string& name, int arity) const;  // -1 if absent
  ConstId find_constant(const std::string& name) const;             // -1 if absent
  ConstId find_int(long value) const;                               // -1 if absent
  const RangeDecl* find_range(const std::string& name) const;
  bool is_sort(const std::string& name) const;

  bool constant_in_sort(ConstId c, const std::string& sort) const;
  // Candidate constants for a sort, in declaration order; sort "" means all.
  std::vector<ConstId> sort_candidates(const std::string& sort) const;

  const std::vector<PredDecl>& predicates() const { return preds_; }
  const std::vector<ConstDecl>& constants() const { return consts_; }
  const std::vector<RangeDecl>& ranges() const { return ranges_; }
  // Interleaving of named-constant ('c') and range ('r') declarations, so the
  // printer can reproduce the exact constant ordering grounding depends on.
  const std::vector<std::pair<char, int>>& declaration_order() const { return decl_order_; }

  bool operator==(const Vocabulary& o) const;

 private:
  std::vector<PredDecl> preds_;
  std::vector<ConstDecl> consts_;
  std::vector<RangeDecl> ranges_;
  std::vector<std::pair<char, int>> decl_order_;
};

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
  enum class Kind { constant, variable, integer, arith };
  Kind kind = Kind::constant;
  ConstId cid = -1;     // constant
  std::string var;      // variable
  long ival = 0;        // integer literal
  char op = 0;          // arith: '+' or '-'
  TermPtr lhs, rhs;     // arith operands

  static TermPtr constant(ConstId c);
  static TermPtr variable(std::string name);
  static TermPtr integer(long v);
  static TermPtr arith(char op, TermPtr l, TermPtr r);
};

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

enum class CompareRel { eq, ne, lt, le };

struct Formula {
  enum class Kind { atom, compare, f_not, f_and, f_or, forall, exists, truth };
  Kind kind = Kind::truth;

  // atom
  PredId pred = -1;
  std::vector<TermPtr> args;

  // compare
  CompareRel rel = CompareRel::eq;
  TermPtr lhs, rhs;

  // connectives / quantifier body
  FormulaPtr a, b;

  // quantifier
  std::string var;
  std::vector<ConstId> candidates;  // resolved at parse time from sort usage

  // truth constant
  bool truth_value = true;

  static FormulaPtr atom(PredId pred, std::vector<TermPtr> args);
  static FormulaPtr compare(CompareRel rel, TermPtr l, TermPtr r);
  static FormulaPtr negation(FormulaPtr f);
  static FormulaPtr conj(FormulaPtr l, FormulaPtr r);
  static FormulaPtr disj(FormulaPtr l, FormulaPtr r);
  static FormulaPtr quant(Kind k, std::string var, std::vector<ConstId> candidates, FormulaPtr body);
  static FormulaPtr truth_const(bool v);
};

struct AtomRef {
  PredId pred = -1;
  std::vector<TermPtr> args;
};

struct HeadChoice {
  AtomRef atom;
  Rational prob;
};

struct CPLaw {
  std::vector<std::string> vars;  // law-level universally quantified variables
  std::vector<std::vector<ConstId>> var_candidates;
  std::vector<HeadChoice> head;
  FormulaPtr body;  // null = unconditional
  int source_index = -1;
};

struct CPTheory {
  Vocabulary vocab;
  std::vector<CPLaw> laws;  // a multiset: duplicates are distinct by position
};

bool term_equal(const TermPtr& a, const TermPtr& b);
bool formula_equal(const FormulaPtr& a, const FormulaPtr& b);
bool law_equal(const CPLaw& a, const CPLaw& b);  // ignores source_index
bool theory_equal(const CPTheory& a, const CPTheory& b);

Rational head_mass(const CPLaw& law);

}  // namespace cplogic
