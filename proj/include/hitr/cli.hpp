#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace hitr::cli {

enum ExitCode : int {
  kOk = 0,
  kConfigError = 2,
  kDataError = 3,
  kInternalError = 4,
};

// Runs one command line (without the program name). Errors are reported on
// `err` as a single line "error[<Code>]: <message>".
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

int main(int argc, const char* const* argv);

}  // namespace hitr::cli
