#pragma once

#include <string>
#include <vector>

namespace ppassoc::cli {

// Exit codes: 0 success, 2 input error, 3 degenerate data escalated by --strict.
int run(int argc, const char* const* argv);
int run(const std::vector<std::string>& args);  // args without the program name

}  // namespace ppassoc::cli
