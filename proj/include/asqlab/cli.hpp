#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace asqlab {

// Batch front-end. Args exclude the program name. Returns the process exit
// code: 0 all checks passed, 1 a check failed (the report carries the
// counterexample), 2 usage or configuration error.
int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err);

} // namespace asqlab
