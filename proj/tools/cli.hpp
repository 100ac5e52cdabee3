#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pgcl::cli {

enum ExitCode { kOk = 0, kFails = 1, kUsage = 2, kInconclusive = 3 };

// Runs one command line (args excludes the program name). Results go to
// `out`, diagnostics to `err`; `in` backs `--program -`.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace pgcl::cli
