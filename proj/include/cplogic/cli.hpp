#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cplogic {

// Command-line front end.  Exit codes: 0 success, 1 usage or input errors,
// 2 semantic invalidity (invalid theory, unsound LPAD, semantics mismatch,
// resource caps).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cplogic
