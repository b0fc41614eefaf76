#include "cplogic/wfs.hpp"

#include <algorithm>

#include "cplogic/errors.hpp"

namespace cplogic {

Program make_program(const GroundCPTheory& base, std::vector<ProgramRule> rules,
                     std::vector<PredId> open_preds) {
  Program p;
  p.base = &base;
  p.rules = std::move(rules);
  p.open_preds = std::move(open_preds);
  p.open_atoms = base.empty_atom_set();
  for (const GroundAtom& a : base.atoms())
    for (PredId q : p.open_preds)
      if (a.pred == q) p.open_atoms.set(static_cast<std::size_t>(a.id));
  for (const ProgramRule& r : p.rules)
    if (p.open_atoms.test(static_cast<std::size_t>(r.head)))
      throw CpError(Errc::syntax_error,
                    "open predicate in rule head: " + base.atom_name(r.head));
  return p;
}

namespace {

Interpretation least_precise_extension(const Program& program, const Bitset& open_true) {
  const GroundCPTheory& base = *program.base;
  Interpretation nu(base.atom_count(), TruthValue::u);
  for (std::size_t i = 0; i < base.atom_count(); ++i)
    if (program.open_atoms.test(i))
      nu.set(static_cast<AtomId>(i), open_true.test(i) ? TruthValue::t : TruthValue::f);
  return nu;
}

}  // namespace

std::vector<AtomId> greatest_unfounded_set(const Program& program, const Interpretation& nu) {
  const GroundCPTheory& base = *program.base;

  std::vector<char> in_u(base.atom_count(), 0);
  for (std::size_t i = 0; i < base.atom_count(); ++i)
    if (!program.open_atoms.test(i) && nu[static_cast<AtomId>(i)] == TruthValue::u) in_u[i] = 1;

  // Greatest fixpoint: repeatedly remove atoms some rule can still support
  // once the rest of U is assumed false.
  bool changed = true;
  while (changed) {
    changed = false;
    Interpretation probe = nu;
    for (std::size_t i = 0; i < in_u.size(); ++i)
      if (in_u[i]) probe.set(static_cast<AtomId>(i), TruthValue::f);
    for (const ProgramRule& r : program.rules) {
      if (!in_u[static_cast<std::size_t>(r.head)]) continue;
      if (eval3(base, r.body, probe) != TruthValue::f) {
        in_u[static_cast<std::size_t>(r.head)] = 0;
        changed = true;
      }
    }
  }

  std::vector<AtomId> out;
  for (std::size_t i = 0; i < in_u.size(); ++i)
    if (in_u[i]) out.push_back(static_cast<AtomId>(i));
  return out;
}

Interpretation well_founded_model(const Program& program, const Bitset& open_true,
                                  std::vector<WfStep>* trace) {
  const GroundCPTheory& base = *program.base;
  Interpretation nu = least_precise_extension(program, open_true);

  while (true) {
    // Derive true atoms through rules with true bodies; least fixpoint.
    bool derived = true;
    while (derived) {
      derived = false;
      for (std::size_t ri = 0; ri < program.rules.size(); ++ri) {
        const ProgramRule& r = program.rules[ri];
        if (nu[r.head] == TruthValue::t) continue;
        if (eval3(base, r.body, nu) == TruthValue::t) {
          nu.set(r.head, TruthValue::t);
          if (trace) {
            WfStep step;
            step.kind = WfStep::Kind::make_true;
            step.atom = r.head;
            step.rule_index = static_cast<int>(ri);
            trace->push_back(std::move(step));
          }
          derived = true;
        }
      }
    }

    std::vector<AtomId> unfounded = greatest_unfounded_set(program, nu);
    if (unfounded.empty()) break;
    for (AtomId a : unfounded) nu.set(a, TruthValue::f);
    if (trace) {
      WfStep step;
      step.kind = WfStep::Kind::make_false;
      step.unfounded = unfounded;
      trace->push_back(std::move(step));
    }
  }
  return nu;
}

InductionCheck check_wf_induction(const Program& program, const Bitset& open_true,
                                  const std::vector<WfStep>& steps) {
  const GroundCPTheory& base = *program.base;
  Interpretation nu = least_precise_extension(program, open_true);

  auto reject = [](int index, std::string reason) {
    return InductionCheck{false, index, std::move(reason)};
  };

  for (std::size_t si = 0; si < steps.size(); ++si) {
    const WfStep& step = steps[si];
    int index = static_cast<int>(si);
    if (step.kind == WfStep::Kind::make_true) {
      if (step.rule_index < 0 || step.rule_index >= static_cast<int>(program.rules.size()))
        return reject(index, "justifying rule index out of range");
      const ProgramRule& r = program.rules[static_cast<std::size_t>(step.rule_index)];
      if (r.head != step.atom)
        return reject(index, "justifying rule does not derive " + base.atom_name(step.atom));
      if (nu[step.atom] == TruthValue::f)
        return reject(index, base.atom_name(step.atom) + " is already false");
      if (eval3(base, r.body, nu) != TruthValue::t)
        return reject(index, "body of the justifying rule is not true");
      nu.set(step.atom, TruthValue::t);
    } else {
      Interpretation next = nu;
      for (AtomId a : step.unfounded) {
        if (program.open_atoms.test(static_cast<std::size_t>(a)))
          return reject(index, base.atom_name(a) + " is an open atom");
        if (nu[a] != TruthValue::u)
          return reject(index, base.atom_name(a) + " is not unknown");
        next.set(a, TruthValue::f);
      }
      for (const ProgramRule& r : program.rules) {
        bool in_set = std::find(step.unfounded.begin(), step.unfounded.end(), r.head) !=
                      step.unfounded.end();
        if (in_set && eval3(base, r.body, next) != TruthValue::f)
          return reject(index, "rule for " + base.atom_name(r.head) +
                                   " keeps a non-false body: not an unfounded set");
      }
      nu = next;
    }
  }
  return InductionCheck{};
}

}  // namespace cplogic
