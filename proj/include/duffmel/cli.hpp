#pragma once

#include <ostream>

namespace duffmel {

// Exit codes: 0 success, 2 usage, 3 tolerance failure, 4 numerical failure.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace duffmel
