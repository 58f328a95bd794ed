#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace heegner::cli {

enum ExitCode : int { kOk = 0, kValidation = 1, kInvariant = 2 };

// Runs one subcommand (genus | classnum | theta | measure | converge | eigen |
// surject). args excludes the program name.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int dispatch(int argc, char** argv);

}  // namespace heegner::cli
