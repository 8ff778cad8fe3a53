#pragma once

#include <iosfwd>

namespace nclab {

/// Exit codes: 0 success, 1 config/usage error, 2 numerical failure, 3 I/O error.
int command_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int command_dispatch(int argc, const char* const* argv);

}  // namespace nclab
