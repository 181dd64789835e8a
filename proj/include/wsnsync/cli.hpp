#pragma once

#include <iosfwd>

namespace wsnsync {

/// Entry point shared by the wsnsync tool and the tests.
int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

}  // namespace wsnsync
