#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pnm::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kIoError = 2,
  kValidation = 3,
};

// args[0] is the program name. Reports go to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace pnm::cli
