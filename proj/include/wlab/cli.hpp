#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace wlab {

// Command-line front end. Returns the process exit code:
//   0 success, 1 verification failures, 2 configuration or surface parse
//   error, 3 numerical failure.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace wlab
