#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mssp {

/// Runs one command line, program name excluded. Errors are reported
/// on `err` as a single "error: <Kind>: <message>" line with a nonzero
/// return value.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mssp
