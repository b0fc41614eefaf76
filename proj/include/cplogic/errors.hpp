#pragma once

#include <stdexcept>
#include <string>

namespace cplogic {

enum class Errc {
  syntax_error,
  head_mass_exceeded,
  non_positive_probability,
  undeclared_symbol,
  exogenous_in_head,
  domain_empty,
  arithmetic_on_non_integer,
  mismatched_base,
  resource_limit,
  invalid_theory,
  unsound_lpad,
  unknown_rule_selector,
  cyclic_graph,
  row_sum_not_one,
  missing_row,
  timing_not_respected,
  io_error,
};

const char* errc_name(Errc code);

class CpError : public std::runtime_error {
 public:
  CpError(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

class ParseError : public CpError {
 public:
  ParseError(Errc code, const std::string& what, int line, int col)
      : CpError(code, "line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + what),
        line_(line),
        col_(col) {}

  int line() const { return line_; }
  int col() const { return col_; }

 private:
  int line_;
  int col_;
};

}  // namespace cplogic
