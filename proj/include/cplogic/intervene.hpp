#pragma once

#include <string>
#include <variant>
#include <vector>

#include "cplogic/ast.hpp"

namespace cplogic {

// Rule-level interventions: remove laws (by source index or by canonical
// printed form) and add new ones.
struct InterventionScript {
  std::vector<std::variant<int, std::string>> removals;
  std::vector<std::string> additions;  // law text in .cpl syntax
};

// JSON: {"remove": [0, "(death:9/10) <- kidney_failure."], "add": ["..."]}
InterventionScript parse_intervention(const std::string& json_text);

// Returns the edited theory; the input is untouched and surviving laws keep
// their source indices.
CPTheory apply_intervention(const CPTheory& theory, const InterventionScript& script);

}  // namespace cplogic
