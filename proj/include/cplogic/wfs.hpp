#pragma once

#include <string>
#include <vector>

#include "cplogic/ground.hpp"
#include "cplogic/logic3.hpp"

namespace cplogic {

struct ProgramRule {
  AtomId head = -1;
  FormulaPtr body;  // null = true
};

// A ground rule program over the Herbrand base of a grounded theory, with
// open (exogenous-style) predicates.  Open predicates may not occur in heads.
struct Program {
  const GroundCPTheory* base = nullptr;
  std::vector<ProgramRule> rules;
  std::vector<PredId> open_preds;
  Bitset open_atoms;
};

Program make_program(const GroundCPTheory& base, std::vector<ProgramRule> rules,
                     std::vector<PredId> open_preds);

struct WfStep {
  enum class Kind { make_true, make_false };
  Kind kind = Kind::make_true;
  AtomId atom = -1;                // make_true
  int rule_index = -1;             // make_true: justifying rule (index into Program::rules)
  std::vector<AtomId> unfounded;   // make_false
};

// Deterministic well-founded model in the open interpretation given by
// open_true (t for set open atoms, f for the other open atoms).  When trace
// is non-null the induction steps taken are appended to it.
Interpretation well_founded_model(const Program& program, const Bitset& open_true,
                                  std::vector<WfStep>* trace = nullptr);

// The largest set U of atoms unknown in nu such that after falsifying all of
// U, every rule body for each member of U is false.
std::vector<AtomId> greatest_unfounded_set(const Program& program, const Interpretation& nu);

struct InductionCheck {
  bool ok = true;
  int violating_index = -1;
  std::string reason;
};

// Audits a step sequence against the definition of a well-founded induction,
// starting from the least precise extension of the open interpretation.
InductionCheck check_wf_induction(const Program& program, const Bitset& open_true,
                                  const std::vector<WfStep>& steps);

}  // namespace cplogic
