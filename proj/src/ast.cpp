#include "cplogic/ast.hpp"

#include <algorithm>

#include "cplogic/errors.hpp"

namespace cplogic {

PredId Vocabulary::add_predicate(PredDecl decl) {
  if (find_predicate(decl.name, decl.arity) >= 0)
    throw CpError(Errc::syntax_error, "duplicate predicate declaration " + decl.name + "/" + std::to_string(decl.arity));
  if (!decl.arg_sorts.empty() && static_cast<int>(decl.arg_sorts.size()) != decl.arity)
    throw CpError(Errc::syntax_error, "sort list does not match arity of " + decl.name);
  preds_.push_back(std::move(decl));
  return static_cast<PredId>(preds_.size()) - 1;
}

ConstId Vocabulary::add_constant(const std::string& name, const std::string& sort) {
  ConstId existing = find_constant(name);
  if (existing >= 0) {
    if (consts_[existing].sort != sort)
      throw CpError(Errc::syntax_error, "constant " + name + " redeclared with a different sort");
    return existing;
  }
  consts_.push_back(ConstDecl{name, sort, false, 0});
  decl_order_.emplace_back('c', static_cast<int>(consts_.size()) - 1);
  return static_cast<ConstId>(consts_.size()) - 1;
}

ConstId Vocabulary::add_int_constant(long value) {
  ConstId existing = find_int(value);
  if (existing >= 0) return existing;
  consts_.push_back(ConstDecl{std::to_string(value), "", true, value});
  return static_cast<ConstId>(consts_.size()) - 1;
}

void Vocabulary::add_range(const std::string& name, long lo, long hi) {
  if (lo > hi) throw CpError(Errc::syntax_error, "empty range " + name);
  if (find_range(name)) throw CpError(Errc::syntax_error, "duplicate range " + name);
  ranges_.push_back(RangeDecl{name, lo, hi});
  decl_order_.emplace_back('r', static_cast<int>(ranges_.size()) - 1);
  for (long v = lo; v <= hi; ++v) add_int_constant(v);
}

PredId Vocabulary::find_predicate(const std::string& name, int arity) const {
  for (std::size_t i = 0; i < preds_.size(); ++i)
    if (preds_[i].name == name && preds_[i].arity == arity) return static_cast<PredId>(i);
  return -1;
}

ConstId Vocabulary::find_constant(const std::string& name) const {
  for (std::size_t i = 0; i < consts_.size(); ++i)
    if (consts_[i].name == name) return static_cast<ConstId>(i);
  return -1;
}

ConstId Vocabulary::find_int(long value) const {
  for (std::size_t i = 0; i < consts_.size(); ++i)
    if (consts_[i].is_int && consts_[i].int_value == value) return static_cast<ConstId>(i);
  return -1;
}

const RangeDecl* Vocabulary::find_range(const std::string& name) const {
  for (const auto& r : ranges_)
    if (r.name == name) return &r;
  return nullptr;
}

bool Vocabulary::is_sort(const std::string& name) const {
  if (find_range(name)) return true;
  for (const auto& c : consts_)
    if (!c.sort.empty() && c.sort == name) return true;
  return false;
}

bool Vocabulary::constant_in_sort(ConstId c, const std::string& sort) const {
  if (sort.empty()) return true;
  const ConstDecl& d = consts_[static_cast<std::size_t>(c)];
  if (const RangeDecl* r = find_range(sort)) return d.is_int && d.int_value >= r->lo && d.int_value <= r->hi;
  return d.sort == sort;
}

std::vector<ConstId> Vocabulary::sort_candidates(const std::string& sort) const {
  std::vector<ConstId> out;
  for (std::size_t i = 0; i < consts_.size(); ++i)
    if (constant_in_sort(static_cast<ConstId>(i), sort)) out.push_back(static_cast<ConstId>(i));
  return out;
}

bool Vocabulary::operator==(const Vocabulary& o) const {
  auto pred_eq = [](const PredDecl& a, const PredDecl& b) {
    return a.name == b.name && a.arity == b.arity && a.exogenous == b.exogenous && a.arg_sorts == b.arg_sorts;
  };
  auto const_eq = [](const ConstDecl& a, const ConstDecl& b) {
    return a.name == b.name && a.sort == b.sort && a.is_int == b.is_int && a.int_value == b.int_value;
  };
  auto range_eq = [](const RangeDecl& a, const RangeDecl& b) {
    return a.name == b.name && a.lo == b.lo && a.hi == b.hi;
  };
  return std::equal(preds_.begin(), preds_.end(), o.preds_.begin(), o.preds_.end(), pred_eq) &&
         std::equal(consts_.begin(), consts_.end(), o.consts_.begin(), o.consts_.end(), const_eq) &&
         std::equal(ranges_.begin(), ranges_.end(), o.ranges_.begin(), o.ranges_.end(), range_eq);
}

TermPtr Term::constant(ConstId c) {
  auto t = std::make_shared<Term>();
  t->kind = Kind::constant;
  t->cid = c;
  return t;
}

TermPtr Term::variable(std::string name) {
  auto t = std::make_shared<Term>();
  t->kind = Kind::variable;
  t->var = std::move(name);
  return t;
}

TermPtr Term::integer(long v) {
  auto t = std::make_shared<Term>();
  t->kind = Kind::integer;
  t->ival = v;
  return t;
}

TermPtr Term::arith(char op, TermPtr l, TermPtr r) {
  auto t = std::make_shared<Term>();
  t->kind = Kind::arith;
  t->op = op;
  t->lhs = std::move(l);
  t->rhs = std::move(r);
  return t;
}

FormulaPtr Formula::atom(PredId pred, std::vector<TermPtr> args) {
  auto f = std::make_shared<Formula>();
  f->kind = Kind::atom;
  f->pred = pred;
  f->args = std::move(args);
  return f;
}

FormulaPtr Formula::compare(CompareRel rel, TermPtr l, TermPtr r) {
  auto f = std::make_shared<Formula>();
  f->kind = Kind::compare;
  f->rel = rel;
  f->lhs = std::move(l);
  f->rhs = std::move(r);
  return f;
}

FormulaPtr Formula::negation(FormulaPtr g) {
  auto f = std::make_shared<Formula>();
  f->kind = Kind::f_not;
  f->a = std::move(g);
  return f;
}

FormulaPtr Formula::conj(FormulaPtr l, FormulaPtr r) {
  auto f = std::make_shared<Formula>();
  f->kind = Kind::f_and;
  f->a = std::move(l);
  f->b = std::move(r);
  return f;
}

FormulaPtr Formula::disj(FormulaPtr l, FormulaPtr r) {
  auto f = std::make_shared<Formula>();
  f->kind = Kind::f_or;
  f->a = std::move(l);
  f->b = std::move(r);
  return f;
}

FormulaPtr Formula::quant(Kind k, std::string var, std::vector<ConstId> candidates, FormulaPtr body) {
  auto f = std::make_shared<Formula>();
  f->kind = k;
  f->var = std::move(var);
  f->candidates = std::move(candidates);
  f->a = std::move(body);
  return f;
}

FormulaPtr Formula::truth_const(bool v) {
  auto f = std::make_shared<Formula>();
  f->kind = Kind::truth;
  f->truth_value = v;
  return f;
}

bool term_equal(const TermPtr& a, const TermPtr& b) {
  if (!a || !b) return a == b;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Term::Kind::constant: return a->cid == b->cid;
    case Term::Kind::variable: return a->var == b->var;
    case Term::Kind::integer: return a->ival == b->ival;
    case Term::Kind::arith: return a->op == b->op && term_equal(a->lhs, b->lhs) && term_equal(a->rhs, b->rhs);
  }
  return false;
}

bool formula_equal(const FormulaPtr& a, const FormulaPtr& b) {
  if (!a || !b) return a == b;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Formula::Kind::atom: {
      if (a->pred != b->pred || a->args.size() != b->args.size()) return false;
      for (std::size_t i = 0; i < a->args.size(); ++i)
        if (!term_equal(a->args[i], b->args[i])) return false;
      return true;
    }
    case Formula::Kind::compare:
      return a->rel == b->rel && term_equal(a->lhs, b->lhs) && term_equal(a->rhs, b->rhs);
    case Formula::Kind::f_not: return formula_equal(a->a, b->a);
    case Formula::Kind::f_and:
    case Formula::Kind::f_or: return formula_equal(a->a, b->a) && formula_equal(a->b, b->b);
    case Formula::Kind::forall:
    case Formula::Kind::exists:
      return a->var == b->var && a->candidates == b->candidates && formula_equal(a->a, b->a);
    case Formula::Kind::truth: return a->truth_value == b->truth_value;
  }
  return false;
}

bool law_equal(const CPLaw& a, const CPLaw& b) {
  if (a.vars != b.vars || a.head.size() != b.head.size()) return false;
  for (std::size_t i = 0; i < a.head.size(); ++i) {
    if (a.head[i].atom.pred != b.head[i].atom.pred || a.head[i].prob != b.head[i].prob) return false;
    if (a.head[i].atom.args.size() != b.head[i].atom.args.size()) return false;
    for (std::size_t j = 0; j < a.head[i].atom.args.size(); ++j)
      if (!term_equal(a.head[i].atom.args[j], b.head[i].atom.args[j])) return false;
  }
  return formula_equal(a.body, b.body);
}

bool theory_equal(const CPTheory& a, const CPTheory& b) {
  if (!(a.vocab == b.vocab) || a.laws.size() != b.laws.size()) return false;
  for (std::size_t i = 0; i < a.laws.size(); ++i)
    if (!law_equal(a.laws[i], b.laws[i])) return false;
  return true;
}

Rational head_mass(const CPLaw& law) {
  Rational sum = 0;
  for (const auto& h : law.head) sum += h.prob;
  return sum;
}

}  // namespace cplogic
