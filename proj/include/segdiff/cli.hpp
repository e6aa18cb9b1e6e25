#pragma once

#include <ostream>

namespace segdiff::cli {

// Entry point of the segdiff command. Returns the process exit status:
// 0 success, 1 data error, 2 usage error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace segdiff::cli
