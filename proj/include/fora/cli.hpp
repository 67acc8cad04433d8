#pragma once

#include <iosfwd>

namespace fora {

/// Runs the command-line front end. Returns the process exit code:
/// 0 ok, 2 usage, 3 I/O, 4 format or incompatible index, 5 internal error.
int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

}  // namespace fora
