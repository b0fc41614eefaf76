#pragma once

#include <string>

#include "cplogic/ast.hpp"

namespace cplogic {

// Canonical rendering; parse_theory(print_theory(T)) is structurally equal
// to T up to source positions.
std::string print_theory(const CPTheory& theory);
std::string print_law(const Vocabulary& vocab, const CPLaw& law);
std::string print_formula(const Vocabulary& vocab, const FormulaPtr& formula);
std::string print_term(const Vocabulary& vocab, const TermPtr& term);

}  // namespace cplogic
