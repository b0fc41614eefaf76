#include "cplogic/lpad.hpp"

#include "cplogic/errors.hpp"

namespace cplogic {

namespace {

int option_count(const GroundCPLaw& rule) {
  int n = static_cast<int>(rule.head.size());
  if (rule.head_mass < 1) ++n;  // the empty outcome
  return n;
}

// Outcome k for a rule: head index, or -1 for the empty outcome (last).
int option_at(const GroundCPLaw& rule, int k) {
  return k < static_cast<int>(rule.head.size()) ? k : -1;
}

}  // namespace

SelectionCursor::SelectionCursor(const GroundCPTheory& theory) : theory_(theory) {
  options_.reserve(theory.rule_count());
  for (const GroundCPLaw& r : theory.rules()) options_.push_back(option_count(r));
  current_.choice.assign(theory.rule_count(), 0);
}

bool SelectionCursor::next(Selection& out) {
  if (done_) return false;
  if (first_) {
    first_ = false;
  } else {
    // Increment with the last rule varying fastest.
    std::size_t i = options_.size();
    while (i > 0) {
      int& slot = current_.choice[i - 1];
      if (++slot < options_[i - 1]) break;
      slot = 0;
      --i;
    }
    if (i == 0) {
      done_ = true;
      return false;
    }
  }
  out.choice.resize(current_.choice.size());
  for (std::size_t r = 0; r < current_.choice.size(); ++r)
    out.choice[r] = option_at(theory_.rules()[r], current_.choice[r]);
  return true;
}

std::size_t selection_count(const GroundCPTheory& theory, std::size_t cap) {
  std::size_t n = 1;
  for (const GroundCPLaw& r : theory.rules()) {
    n *= static_cast<std::size_t>(option_count(r));
    if (n > cap) throw CpError(Errc::resource_limit, "selection space exceeds the cap");
  }
  return n;
}

std::vector<Selection> enumerate_selections(const GroundCPTheory& theory, std::size_t cap) {
  selection_count(theory, cap);
  std::vector<Selection> out;
  SelectionCursor cursor(theory);
  Selection s;
  while (cursor.next(s)) out.push_back(s);
  return out;
}

Rational selection_probability(const GroundCPTheory& theory, const Selection& sigma) {
  Rational p = 1;
  for (std::size_t r = 0; r < sigma.choice.size(); ++r) {
    const GroundCPLaw& rule = theory.rules()[r];
    int c = sigma.choice[r];
    if (c < 0)
      p *= Rational(1) - rule.head_mass;
    else
      p *= rule.head[static_cast<std::size_t>(c)].prob;
  }
  return p;
}

Program instance(const GroundCPTheory& theory, const Selection& sigma) {
  std::vector<ProgramRule> rules;
  for (std::size_t r = 0; r < theory.rule_count(); ++r) {
    int c = sigma.choice[r];
    if (c < 0) continue;
    const GroundCPLaw& rule = theory.rules()[r];
    FormulaPtr body = rule.body ? rule.body : Formula::truth_const(true);
    rules.push_back(ProgramRule{rule.head[static_cast<std::size_t>(c)].atom, body});
  }
  std::vector<PredId> open;
  for (std::size_t p = 0; p < theory.vocab().predicates().size(); ++p)
    if (theory.vocab().predicates()[p].exogenous) open.push_back(static_cast<PredId>(p));
  return make_program(theory, std::move(rules), std::move(open));
}

SoundnessResult is_sound(const GroundCPTheory& theory, const Bitset& context, std::size_t cap) {
  selection_count(theory, cap);
  SelectionCursor cursor(theory);
  Selection sigma;
  while (cursor.next(sigma)) {
    Program prog = instance(theory, sigma);
    Interpretation wfm = well_founded_model(prog, context);
    if (!wfm.total()) return SoundnessResult{false, sigma};
  }
  return SoundnessResult{true, std::nullopt};
}

Distribution instance_semantics(const GroundCPTheory& theory, const Bitset& context,
                                std::size_t cap) {
  selection_count(theory, cap);
  Distribution mu;
  SelectionCursor cursor(theory);
  Selection sigma;
  while (cursor.next(sigma)) {
    Program prog = instance(theory, sigma);
    Interpretation wfm = well_founded_model(prog, context);
    if (!wfm.total()) {
      std::string which;
      for (std::size_t r = 0; r < sigma.choice.size(); ++r)
        which += (r ? "," : "") + std::to_string(sigma.choice[r]);
      throw CpError(Errc::unsound_lpad, "instance for selection [" + which + "] has a partial model");
    }
    mu.mass[wfm.true_set()] += selection_probability(theory, sigma);
  }
  return mu;
}

}  // namespace cplogic
