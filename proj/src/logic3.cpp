#include "cplogic/logic3.hpp"

#include "cplogic/errors.hpp"

namespace cplogic {

Interpretation Interpretation::from_true_set(const Bitset& trues) {
  Interpretation nu(trues.size(), TruthValue::f);
  for (std::size_t i = trues.next_set(0); i < trues.size(); i = trues.next_set(i + 1))
    nu.set(static_cast<AtomId>(i), TruthValue::t);
  return nu;
}

bool Interpretation::total() const {
  for (TruthValue v : vals_)
    if (v == TruthValue::u) return false;
  return true;
}

Bitset Interpretation::true_set() const {
  Bitset out(vals_.size());
  for (std::size_t i = 0; i < vals_.size(); ++i)
    if (vals_[i] == TruthValue::t) out.set(i);
  return out;
}

CmpResult compare(const Interpretation& nu1, const Interpretation& nu2, OrderKind order) {
  if (nu1.size() != nu2.size())
    throw CpError(Errc::mismatched_base, "interpretations over different Herbrand bases");
  bool le = true, ge = true;
  for (std::size_t i = 0; i < nu1.size(); ++i) {
    TruthValue a = nu1[static_cast<AtomId>(i)], b = nu2[static_cast<AtomId>(i)];
    if (order == OrderKind::truth) {
      if (a > b) le = false;
      if (a < b) ge = false;
    } else {
      if (!tv_leq_precision(a, b)) le = false;
      if (!tv_leq_precision(b, a)) ge = false;
    }
  }
  if (le) return CmpResult::less_or_equal;
  if (ge) return CmpResult::greater;
  return CmpResult::incomparable;
}

namespace {

TruthValue eval3_rec(const GroundCPTheory& theory, const FormulaPtr& f, const Interpretation& nu,
                     Env& env) {
  switch (f->kind) {
    case Formula::Kind::atom: {
      AtomId id = resolve_atom(theory, f->pred, f->args, env);
      if (id < 0) return TruthValue::f;  // outside the Herbrand base
      return nu[id];
    }
    case Formula::Kind::compare:
      return eval_compare(theory.vocab(), f->rel, f->lhs, f->rhs, env) ? TruthValue::t : TruthValue::f;
    case Formula::Kind::f_not: return tv_not(eval3_rec(theory, f->a, nu, env));
    case Formula::Kind::f_and: {
      TruthValue a = eval3_rec(theory, f->a, nu, env);
      if (a == TruthValue::f) return TruthValue::f;
      return tv_min(a, eval3_rec(theory, f->b, nu, env));
    }
    case Formula::Kind::f_or: {
      TruthValue a = eval3_rec(theory, f->a, nu, env);
      if (a == TruthValue::t) return TruthValue::t;
      return tv_max(a, eval3_rec(theory, f->b, nu, env));
    }
    case Formula::Kind::forall: {
      TruthValue acc = TruthValue::t;
      for (ConstId c : f->candidates) {
        env.emplace_back(f->var, c);
        acc = tv_min(acc, eval3_rec(theory, f->a, nu, env));
        env.pop_back();
        if (acc == TruthValue::f) break;
      }
      return acc;
    }
    case Formula::Kind::exists: {
      TruthValue acc = TruthValue::f;
      for (ConstId c : f->candidates) {
        env.emplace_back(f->var, c);
        acc = tv_max(acc, eval3_rec(theory, f->a, nu, env));
        env.pop_back();
        if (acc == TruthValue::t) break;
      }
      return acc;
    }
    case Formula::Kind::truth: return f->truth_value ? TruthValue::t : TruthValue::f;
  }
  return TruthValue::u;
}

bool eval_classical_rec(const GroundCPTheory& theory, const FormulaPtr& f, const Bitset& trues,
                        Env& env) {
  switch (f->kind) {
    case Formula::Kind::atom: {
      AtomId id = resolve_atom(theory, f->pred, f->args, env);
      return id >= 0 && trues.test(static_cast<std::size_t>(id));
    }
    case Formula::Kind::compare: return eval_compare(theory.vocab(), f->rel, f->lhs, f->rhs, env);
    case Formula::Kind::f_not: return !eval_classical_rec(theory, f->a, trues, env);
    case Formula::Kind::f_and:
      return eval_classical_rec(theory, f->a, trues, env) && eval_classical_rec(theory, f->b, trues, env);
    case Formula::Kind::f_or:
      return eval_classical_rec(theory, f->a, trues, env) || eval_classical_rec(theory, f->b, trues, env);
    case Formula::Kind::forall:
      for (ConstId c : f->candidates) {
        env.emplace_back(f->var, c);
        bool v = eval_classical_rec(theory, f->a, trues, env);
        env.pop_back();
        if (!v) return false;
      }
      return true;
    case Formula::Kind::exists:
      for (ConstId c : f->candidates) {
        env.emplace_back(f->var, c);
        bool v = eval_classical_rec(theory, f->a, trues, env);
        env.pop_back();
        if (v) return true;
      }
      return false;
    case Formula::Kind::truth: return f->truth_value;
  }
  return false;
}

}  // namespace

TruthValue eval3(const GroundCPTheory& theory, const FormulaPtr& formula, const Interpretation& nu) {
  if (!formula) return TruthValue::t;
  Env env;
  return eval3_rec(theory, formula, nu, env);
}

bool eval_classical(const GroundCPTheory& theory, const FormulaPtr& formula, const Bitset& trues) {
  if (!formula) return true;
  Env env;
  return eval_classical_rec(theory, formula, trues, env);
}

}  // namespace cplogic
