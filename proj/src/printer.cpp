#include "cplogic/printer.hpp"

#include <sstream>

namespace cplogic {

namespace {

void print_term_rec(std::ostream& os, const Vocabulary& vocab, const TermPtr& t) {
  switch (t->kind) {
    case Term::Kind::constant: os << vocab.constants()[static_cast<std::size_t>(t->cid)].name; break;
    case Term::Kind::variable: os << t->var; break;
    case Term::Kind::integer: os << t->ival; break;
    case Term::Kind::arith:
      print_term_rec(os, vocab, t->lhs);
      os << t->op;
      print_term_rec(os, vocab, t->rhs);
      break;
  }
}

void print_atom(std::ostream& os, const Vocabulary& vocab, PredId pred,
                const std::vector<TermPtr>& args) {
  os << vocab.predicates()[static_cast<std::size_t>(pred)].name;
  if (!args.empty()) {
    os << "(";
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (i) os << ",";
      print_term_rec(os, vocab, args[i]);
    }
    os << ")";
  }
}

int precedence(Formula::Kind k) {
  switch (k) {
    case Formula::Kind::f_or: return 1;
    case Formula::Kind::f_and: return 2;
    case Formula::Kind::f_not:
    case Formula::Kind::forall:
    case Formula::Kind::exists: return 3;
    default: return 4;
  }
}

void print_formula_rec(std::ostream& os, const Vocabulary& vocab, const FormulaPtr& f, int parent_prec) {
  int prec = precedence(f->kind);
  bool parens = prec < parent_prec;
  if (parens) os << "(";
  switch (f->kind) {
    case Formula::Kind::atom: print_atom(os, vocab, f->pred, f->args); break;
    case Formula::Kind::compare: {
      print_term_rec(os, vocab, f->lhs);
      switch (f->rel) {
        case CompareRel::eq: os << " = "; break;
        case CompareRel::ne: os << " != "; break;
        case CompareRel::lt: os << " < "; break;
        case CompareRel::le: os << " <= "; break;
      }
      print_term_rec(os, vocab, f->rhs);
      break;
    }
    case Formula::Kind::f_not:
      os << "~";
      print_formula_rec(os, vocab, f->a, 4);
      break;
    case Formula::Kind::f_and:
      print_formula_rec(os, vocab, f->a, 2);
      os << " & ";
      print_formula_rec(os, vocab, f->b, 3);
      break;
    case Formula::Kind::f_or:
      print_formula_rec(os, vocab, f->a, 1);
      os << " | ";
      print_formula_rec(os, vocab, f->b, 2);
      break;
    case Formula::Kind::forall:
    case Formula::Kind::exists:
      os << (f->kind == Formula::Kind::forall ? "!" : "?") << f->var << " ";
      // The quantifier body is printed parenthesized so that re-parsing, with
      // its maximal right extension, reconstructs the same scope.
      os << "(";
      print_formula_rec(os, vocab, f->a, 0);
      os << ")";
      break;
    case Formula::Kind::truth: os << (f->truth_value ? "true" : "false"); break;
  }
  if (parens) os << ")";
}

}  // namespace

std::string print_term(const Vocabulary& vocab, const TermPtr& term) {
  std::ostringstream os;
  print_term_rec(os, vocab, term);
  return os.str();
}

std::string print_formula(const Vocabulary& vocab, const FormulaPtr& formula) {
  std::ostringstream os;
  print_formula_rec(os, vocab, formula, 0);
  return os.str();
}

std::string print_law(const Vocabulary& vocab, const CPLaw& law) {
  std::ostringstream os;
  for (const std::string& v : law.vars) os << "!" << v << " ";
  bool deterministic = law.head.size() == 1 && law.head[0].prob == 1;
  for (std::size_t i = 0; i < law.head.size(); ++i) {
    if (i) os << " or ";
    if (deterministic) {
      print_atom(os, vocab, law.head[i].atom.pred, law.head[i].atom.args);
    } else {
      os << "(";
      print_atom(os, vocab, law.head[i].atom.pred, law.head[i].atom.args);
      os << ":" << rational_string(law.head[i].prob) << ")";
    }
  }
  if (law.body) {
    os << " <- ";
    print_formula_rec(os, vocab, law.body, 0);
  }
  os << ".";
  return os.str();
}

std::string print_theory(const CPTheory& theory) {
  std::ostringstream os;
  const Vocabulary& vocab = theory.vocab;
  for (const auto& p : vocab.predicates()) {
    os << "pred " << p.name;
    if (!p.arg_sorts.empty()) {
      os << "(";
      for (std::size_t i = 0; i < p.arg_sorts.size(); ++i) {
        if (i) os << ",";
        os << p.arg_sorts[i];
      }
      os << ")";
    } else if (p.arity > 0) {
      os << "/" << p.arity;
    }
    if (p.exogenous) os << " exogenous";
    os << ".\n";
  }
  // Constant and range declarations replayed in original order, merging runs
  // of same-sort constants into one decl; this keeps the constant ordering
  // (and with it the grounding order) stable across print/parse round trips.
  const auto& events = vocab.declaration_order();
  for (std::size_t i = 0; i < events.size();) {
    if (events[i].first == 'r') {
      const RangeDecl& r = vocab.ranges()[static_cast<std::size_t>(events[i].second)];
      os << "range " << r.name << " " << r.lo << ".." << r.hi << ".\n";
      ++i;
      continue;
    }
    const std::string& sort = vocab.constants()[static_cast<std::size_t>(events[i].second)].sort;
    os << "const " << vocab.constants()[static_cast<std::size_t>(events[i].second)].name;
    std::size_t j = i + 1;
    while (j < events.size() && events[j].first == 'c' &&
           vocab.constants()[static_cast<std::size_t>(events[j].second)].sort == sort) {
      os << ", " << vocab.constants()[static_cast<std::size_t>(events[j].second)].name;
      ++j;
    }
    if (!sort.empty()) os << " : " << sort;
    os << ".\n";
    i = j;
  }
  for (const auto& law : theory.laws) os << print_law(vocab, law) << "\n";
  return os.str();
}

}  // namespace cplogic
