#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace normsim {

// Entry point behind the `normsim` binary. Subcommands: run, batch,
// validate. Exit codes: 0 success, 1 invalid scenario/arguments, 2 runtime
// failure.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace normsim
