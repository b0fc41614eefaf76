#include "cplogic/errors.hpp"

namespace cplogic {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::syntax_error: return "SyntaxError";
    case Errc::head_mass_exceeded: return "HeadMassExceeded";
    case Errc::non_positive_probability: return "NonPositiveProbability";
    case Errc::undeclared_symbol: return "UndeclaredSymbol";
    case Errc::exogenous_in_head: return "ExogenousInHead";
    case Errc::domain_empty: return "DomainEmpty";
    case Errc::arithmetic_on_non_integer: return "ArithmeticOnNonInteger";
    case Errc::mismatched_base: return "MismatchedBase";
    case Errc::resource_limit: return "ResourceLimit";
    case Errc::invalid_theory: return "InvalidTheory";
    case Errc::unsound_lpad: return "UnsoundLPAD";
    case Errc::unknown_rule_selector: return "UnknownRuleSelector";
    case Errc::cyclic_graph: return "CyclicGraph";
    case Errc::row_sum_not_one: return "RowSumNotOne";
    case Errc::missing_row: return "MissingRow";
    case Errc::timing_not_respected: return "TimingNotRespected";
    case Errc::io_error: return "IoError";
  }
  return "UnknownError";
}

}  // namespace cplogic
