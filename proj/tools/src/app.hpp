#pragma once

#include <iosfwd>

namespace trirec::cli {

enum ExitCode : int {
    kOk = 0,
    kInternal = 1,
    kUsage = 2,
    kDataError = 3,
    kDiverged = 4,
};

/// Full command-line entry point; never throws.
int run_app(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace trirec::cli
