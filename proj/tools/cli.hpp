#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nonloc::cli {

enum ExitCode { kPass = 0, kError = 1, kFail = 2 };

/// Run one invocation. `args` excludes the program name. Input named '-' is
/// read from `in`; results go to `out` unless --output is given.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err);

}  // namespace nonloc::cli
