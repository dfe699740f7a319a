#pragma once

#include <iosfwd>

namespace pint::cli {

// Exit codes: 0 success, 1 unknown subcommand or usage error, 2 validation or IO error,
// 3 numerical failure.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pint::cli
