#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lfhh {

/// Process exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitInput = 1,      // unreadable file, syntax or typing error, bad flags
  kExitResource = 2,   // depth or budget exhausted before an answer
  kExitInvariant = 3,  // an answer failed certification, or modes disagree
};

/// Run `lfhh <command> ...`; `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lfhh
