#pragma once

#include <string>
#include <string_view>

#include "cplogic/ast.hpp"

namespace cplogic {

struct ParseOptions {
  // When set, constants referenced in a theory without a declaration are
  // auto-declared (untyped).  Off by default; corpus files declare everything.
  bool auto_declare_constants = false;
};

CPTheory parse_theory(std::string_view text, const ParseOptions& opts = {});

// Closed formula over an existing vocabulary (query entry point).
FormulaPtr parse_formula(std::string_view text, const Vocabulary& vocab);

// One law over an existing vocabulary (intervention additions).
CPLaw parse_law(std::string_view text, const Vocabulary& vocab);

}  // namespace cplogic
