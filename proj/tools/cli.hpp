#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qfc::cli {

enum ExitCode : int {
    kOk = 0,
    kValidationError = 1,
    kCheckFailure = 2,
    kIoError = 3,
};

/// Runs one command. `args` excludes the program name. Errors go to `err` as a
/// single line "error[<kind>]: <message>".
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qfc::cli
