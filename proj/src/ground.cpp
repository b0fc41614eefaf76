#include "cplogic/ground.hpp"

#include <algorithm>
#include <functional>
#include <optional>
#include <sstream>

#include "cplogic/errors.hpp"
#include "cplogic/printer.hpp"

namespace cplogic {

namespace {

struct Value {
  bool is_int = false;
  long i = 0;
  ConstId c = -1;  // -1 for integers with no matching constant
};

ConstId env_lookup(const Env& env, const std::string& var) {
  for (auto it = env.rbegin(); it != env.rend(); ++it)
    if (it->first == var) return it->second;
  return -1;
}

// Resolves a term to a constant/integer value; nullopt when it still contains
// an unbound variable.
std::optional<Value> term_value(const Vocabulary& vocab, const TermPtr& t, const Env& env) {
  switch (t->kind) {
    case Term::Kind::constant: {
      const ConstDecl& d = vocab.constants()[static_cast<std::size_t>(t->cid)];
      return Value{d.is_int, d.int_value, t->cid};
    }
    case Term::Kind::variable: {
      ConstId c = env_lookup(env, t->var);
      if (c < 0) return std::nullopt;
      const ConstDecl& d = vocab.constants()[static_cast<std::size_t>(c)];
      return Value{d.is_int, d.int_value, c};
    }
    case Term::Kind::integer: return Value{true, t->ival, vocab.find_int(t->ival)};
    case Term::Kind::arith: {
      auto l = term_value(vocab, t->lhs, env), r = term_value(vocab, t->rhs, env);
      if (!l || !r) return std::nullopt;
      if (!l->is_int || !r->is_int)
        throw CpError(Errc::arithmetic_on_non_integer, "arithmetic over a non-integer constant");
      long v = t->op == '+' ? l->i + r->i : l->i - r->i;
      return Value{true, v, vocab.find_int(v)};
    }
  }
  return std::nullopt;
}

// --- static per-law checks ------------------------------------------------

class LawChecker {
 public:
  LawChecker(const Vocabulary& vocab, const CPLaw& law) : vocab_(vocab), law_(law) {}

  void run() {
    for (std::size_t i = 0; i < law_.vars.size(); ++i) {
      if (law_.var_candidates[i].empty())
        throw CpError(Errc::domain_empty,
                      "law variable " + law_.vars[i] + " has no candidate constants");
      var_int_[law_.vars[i]] = all_int(law_.var_candidates[i]);
    }
    for (const auto& h : law_.head)
      for (const TermPtr& t : h.atom.args) check_term(t, false);
    if (law_.body) check_formula(law_.body);
  }

 private:
  bool all_int(const std::vector<ConstId>& cs) const {
    for (ConstId c : cs)
      if (!vocab_.constants()[static_cast<std::size_t>(c)].is_int) return false;
    return true;
  }

  // must_be_int covers arithmetic operands and order-comparison sides.
  void check_term(const TermPtr& t, bool must_be_int) {
    switch (t->kind) {
      case Term::Kind::constant:
        if (must_be_int && !vocab_.constants()[static_cast<std::size_t>(t->cid)].is_int)
          throw CpError(Errc::arithmetic_on_non_integer,
                        "constant " + vocab_.constants()[static_cast<std::size_t>(t->cid)].name +
                            " used where an integer is required");
        break;
      case Term::Kind::variable: {
        auto it = var_int_.find(t->var);
        bool is_int = it != var_int_.end() ? it->second : true;  // vacuous domains never evaluate
        if (must_be_int && !is_int)
          throw CpError(Errc::arithmetic_on_non_integer,
                        "variable " + t->var + " ranges over non-integers but is used as an integer");
        break;
      }
      case Term::Kind::integer: break;
      case Term::Kind::arith:
        check_term(t->lhs, true);
        check_term(t->rhs, true);
        break;
    }
  }

  void check_formula(const FormulaPtr& f) {
    switch (f->kind) {
      case Formula::Kind::atom:
        for (const TermPtr& t : f->args) check_term(t, false);
        break;
      case Formula::Kind::compare: {
        bool ordered = f->rel == CompareRel::lt || f->rel == CompareRel::le;
        check_term(f->lhs, ordered);
        check_term(f->rhs, ordered);
        break;
      }
      case Formula::Kind::f_not: check_formula(f->a); break;
      case Formula::Kind::f_and:
      case Formula::Kind::f_or:
        check_formula(f->a);
        check_formula(f->b);
        break;
      case Formula::Kind::forall:
      case Formula::Kind::exists: {
        bool shadowed = var_int_.count(f->var) > 0;
        bool saved = shadowed ? var_int_[f->var] : false;
        var_int_[f->var] = f->candidates.empty() || all_int(f->candidates);
        check_formula(f->a);
        if (shadowed)
          var_int_[f->var] = saved;
        else
          var_int_.erase(f->var);
        break;
      }
      case Formula::Kind::truth: break;
    }
  }

  const Vocabulary& vocab_;
  const CPLaw& law_;
  std::unordered_map<std::string, bool> var_int_;
};

// --- substitution of law variables ----------------------------------------

TermPtr subst_term(const Vocabulary& vocab, const TermPtr& t, const Env& env) {
  switch (t->kind) {
    case Term::Kind::constant:
    case Term::Kind::integer: return t;
    case Term::Kind::variable: {
      ConstId c = env_lookup(env, t->var);
      return c < 0 ? t : Term::constant(c);
    }
    case Term::Kind::arith: {
      TermPtr l = subst_term(vocab, t->lhs, env), r = subst_term(vocab, t->rhs, env);
      TermPtr combined = Term::arith(t->op, l, r);
      Env empty;
      auto v = term_value(vocab, combined, empty);  // folds when fully resolved
      if (v) return Term::integer(v->i);
      return combined;
    }
  }
  return t;
}

// env entries with ConstId -1 mark shadowed names that must not be substituted.
FormulaPtr subst_formula(const Vocabulary& vocab, const FormulaPtr& f, Env& env) {
  switch (f->kind) {
    case Formula::Kind::atom: {
      std::vector<TermPtr> args;
      args.reserve(f->args.size());
      for (const TermPtr& t : f->args) args.push_back(subst_term(vocab, t, env));
      return Formula::atom(f->pred, std::move(args));
    }
    case Formula::Kind::compare:
      return Formula::compare(f->rel, subst_term(vocab, f->lhs, env), subst_term(vocab, f->rhs, env));
    case Formula::Kind::f_not: return Formula::negation(subst_formula(vocab, f->a, env));
    case Formula::Kind::f_and: {
      FormulaPtr a = subst_formula(vocab, f->a, env);
      return Formula::conj(a, subst_formula(vocab, f->b, env));
    }
    case Formula::Kind::f_or: {
      FormulaPtr a = subst_formula(vocab, f->a, env);
      return Formula::disj(a, subst_formula(vocab, f->b, env));
    }
    case Formula::Kind::forall:
    case Formula::Kind::exists: {
      env.emplace_back(f->var, -1);
      FormulaPtr body = subst_formula(vocab, f->a, env);
      env.pop_back();
      return Formula::quant(f->kind, f->var, f->candidates, body);
    }
    case Formula::Kind::truth: return f;
  }
  return f;
}

// True when some atom whose arguments are fully resolved by the law-level
// substitution falls outside the Herbrand base; such instantiations are
// dropped entirely.  Atoms still containing formula-bound variables are left
// for evaluation, which treats out-of-base instances as false.
bool mentions_dropped_atom(const GroundCPTheory& theory, const FormulaPtr& f) {
  switch (f->kind) {
    case Formula::Kind::atom: {
      Env empty;
      return resolve_atom(theory, f->pred, f->args, empty) == -1;
    }
    case Formula::Kind::compare:
    case Formula::Kind::truth: return false;
    case Formula::Kind::f_not: return mentions_dropped_atom(theory, f->a);
    case Formula::Kind::f_and:
    case Formula::Kind::f_or:
      return mentions_dropped_atom(theory, f->a) || mentions_dropped_atom(theory, f->b);
    case Formula::Kind::forall:
    case Formula::Kind::exists: return mentions_dropped_atom(theory, f->a);
  }
  return false;
}

}  // namespace

std::string GroundCPTheory::atom_key(PredId pred, const std::vector<ConstId>& args) const {
  std::string out = vocab_.predicates()[static_cast<std::size_t>(pred)].name;
  if (!args.empty()) {
    out += "(";
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (i) out += ",";
      out += vocab_.constants()[static_cast<std::size_t>(args[i])].name;
    }
    out += ")";
  }
  return out;
}

AtomId GroundCPTheory::find_atom(PredId pred, const std::vector<ConstId>& args) const {
  auto it = index_.find(atom_key(pred, args));
  return it == index_.end() ? -1 : it->second;
}

std::string GroundCPTheory::atom_name(AtomId id) const {
  const GroundAtom& a = atoms_[static_cast<std::size_t>(id)];
  return atom_key(a.pred, a.args);
}

AtomId GroundCPTheory::atom_by_name(const std::string& name) const {
  auto it = index_.find(name);
  return it == index_.end() ? -1 : it->second;
}

std::string GroundCPTheory::set_name(const Bitset& set) const {
  std::string out = "{";
  bool first = true;
  for (std::size_t i = set.next_set(0); i < set.size(); i = set.next_set(i + 1)) {
    if (!first) out += ",";
    out += atom_name(static_cast<AtomId>(i));
    first = false;
  }
  return out + "}";
}

AtomId resolve_atom(const GroundCPTheory& theory, PredId pred, const std::vector<TermPtr>& args,
                    const Env& env) {
  std::vector<ConstId> cids;
  cids.reserve(args.size());
  for (const TermPtr& t : args) {
    auto v = term_value(theory.vocab(), t, env);
    if (!v) return -2;
    if (v->c < 0) return -1;
    cids.push_back(v->c);
  }
  return theory.find_atom(pred, cids);
}

bool eval_compare(const Vocabulary& vocab, CompareRel rel, const TermPtr& lhs, const TermPtr& rhs,
                  const Env& env) {
  auto l = term_value(vocab, lhs, env), r = term_value(vocab, rhs, env);
  if (!l || !r) throw CpError(Errc::syntax_error, "comparison over an unbound variable");
  switch (rel) {
    case CompareRel::eq:
    case CompareRel::ne: {
      bool eq = l->is_int == r->is_int && (l->is_int ? l->i == r->i : l->c == r->c);
      return rel == CompareRel::eq ? eq : !eq;
    }
    case CompareRel::lt:
    case CompareRel::le:
      if (!l->is_int || !r->is_int)
        throw CpError(Errc::arithmetic_on_non_integer, "order comparison over non-integers");
      return rel == CompareRel::lt ? l->i < r->i : l->i <= r->i;
  }
  return false;
}

GroundCPTheory ground_theory(const CPTheory& theory) {
  GroundCPTheory g;
  g.vocab_ = theory.vocab;
  const Vocabulary& vocab = g.vocab_;

  // Herbrand base: all instantiations of declared predicates, ordered by
  // (predicate name, arity) then argument tuple in constant declaration order.
  std::vector<PredId> pred_order;
  for (std::size_t i = 0; i < vocab.predicates().size(); ++i)
    pred_order.push_back(static_cast<PredId>(i));
  std::sort(pred_order.begin(), pred_order.end(), [&](PredId a, PredId b) {
    const PredDecl& pa = vocab.predicates()[static_cast<std::size_t>(a)];
    const PredDecl& pb = vocab.predicates()[static_cast<std::size_t>(b)];
    return pa.name != pb.name ? pa.name < pb.name : pa.arity < pb.arity;
  });
  for (PredId p : pred_order) {
    const PredDecl& decl = vocab.predicates()[static_cast<std::size_t>(p)];
    std::vector<std::vector<ConstId>> domains;
    bool empty_domain = false;
    for (int i = 0; i < decl.arity; ++i) {
      domains.push_back(
          vocab.sort_candidates(decl.arg_sorts.empty() ? "" : decl.arg_sorts[static_cast<std::size_t>(i)]));
      empty_domain |= domains.back().empty();
    }
    if (empty_domain) continue;

    std::vector<std::size_t> idx(static_cast<std::size_t>(decl.arity), 0);
    while (true) {
      GroundAtom atom;
      atom.pred = p;
      for (int i = 0; i < decl.arity; ++i)
        atom.args.push_back(domains[static_cast<std::size_t>(i)][idx[static_cast<std::size_t>(i)]]);
      atom.id = static_cast<AtomId>(g.atoms_.size());
      g.index_[g.atom_key(atom.pred, atom.args)] = atom.id;
      g.atoms_.push_back(std::move(atom));

      int carry = decl.arity - 1;
      while (carry >= 0 && ++idx[static_cast<std::size_t>(carry)] == domains[static_cast<std::size_t>(carry)].size()) {
        idx[static_cast<std::size_t>(carry)] = 0;
        --carry;
      }
      if (carry < 0) break;
    }
  }

  g.exogenous_ = Bitset(g.atoms_.size());
  g.endogenous_ = Bitset(g.atoms_.size());
  for (const GroundAtom& a : g.atoms_) {
    if (vocab.predicates()[static_cast<std::size_t>(a.pred)].exogenous)
      g.exogenous_.set(static_cast<std::size_t>(a.id));
    else
      g.endogenous_.set(static_cast<std::size_t>(a.id));
  }

  // Expand each law over all substitutions of its quantified variables.
  for (const CPLaw& law : theory.laws) {
    LawChecker(vocab, law).run();

    std::vector<std::size_t> idx(law.vars.size(), 0);
    while (true) {
      Env env;
      for (std::size_t i = 0; i < law.vars.size(); ++i)
        env.emplace_back(law.vars[i], law.var_candidates[i][idx[i]]);

      GroundCPLaw rule;
      rule.origin = law.source_index;
      bool drop = false;
      for (const HeadChoice& h : law.head) {
        std::vector<TermPtr> args;
        for (const TermPtr& t : h.atom.args) args.push_back(subst_term(vocab, t, env));
        AtomId id = resolve_atom(g, h.atom.pred, args, env);
        if (id < 0) {  // head atoms are always fully resolved
          drop = true;
          break;
        }
        rule.head.push_back(GroundHead{id, h.prob});
      }
      if (!drop && law.body) {
        Env subst_env = env;
        rule.body = subst_formula(vocab, law.body, subst_env);
        drop = mentions_dropped_atom(g, rule.body);
      }
      if (!drop) {
        rule.head_mass = 0;
        for (const GroundHead& h : rule.head) rule.head_mass += h.prob;
        rule.id = static_cast<RuleId>(g.rules_.size());
        g.rules_.push_back(std::move(rule));
      }

      if (law.vars.empty()) break;
      std::size_t carry = law.vars.size();
      while (carry > 0 && ++idx[carry - 1] == law.var_candidates[carry - 1].size()) {
        idx[carry - 1] = 0;
        --carry;
      }
      if (carry == 0) break;
    }
  }

  return g;
}

BodyAtomSets body_atom_sets(const GroundCPTheory& theory, const GroundCPLaw& rule) {
  BodyAtomSets out;
  if (!rule.body) return out;

  std::vector<char> in_all(theory.atom_count(), 0), in_neg(theory.atom_count(), 0);
  Env env;

  // At / At- by simultaneous induction; `negated` tracks the parity of
  // enclosing negations.
  std::function<void(const FormulaPtr&, bool)> walk = [&](const FormulaPtr& f, bool negated) {
    switch (f->kind) {
      case Formula::Kind::atom: {
        AtomId id = resolve_atom(theory, f->pred, f->args, env);
        if (id < 0) return;  // outside the Herbrand base
        in_all[static_cast<std::size_t>(id)] = 1;
        if (negated) in_neg[static_cast<std::size_t>(id)] = 1;
        break;
      }
      case Formula::Kind::compare:
      case Formula::Kind::truth: break;
      case Formula::Kind::f_not: walk(f->a, !negated); break;
      case Formula::Kind::f_and:
      case Formula::Kind::f_or:
        walk(f->a, negated);
        walk(f->b, negated);
        break;
      case Formula::Kind::forall:
      case Formula::Kind::exists:
        for (ConstId c : f->candidates) {
          env.emplace_back(f->var, c);
          walk(f->a, negated);
          env.pop_back();
        }
        break;
    }
  };
  walk(rule.body, false);

  for (std::size_t i = 0; i < in_all.size(); ++i) {
    if (!in_all[i]) continue;
    out.all.push_back(static_cast<AtomId>(i));
    if (in_neg[i])
      out.negative.push_back(static_cast<AtomId>(i));
    else
      out.positive.push_back(static_cast<AtomId>(i));
  }
  return out;
}

std::string print_ground(const GroundCPTheory& theory) {
  std::ostringstream os;
  for (const GroundCPLaw& rule : theory.rules()) {
    CPLaw law;
    for (const GroundHead& h : rule.head) {
      const GroundAtom& a = theory.atoms()[static_cast<std::size_t>(h.atom)];
      AtomRef ref;
      ref.pred = a.pred;
      for (ConstId c : a.args) ref.args.push_back(Term::constant(c));
      law.head.push_back(HeadChoice{std::move(ref), h.prob});
    }
    law.body = rule.body;
    os << print_law(theory.vocab(), law) << " % r" << rule.id << " from law " << rule.origin << "\n";
  }
  return os.str();
}

}  // namespace cplogic
