#pragma once

#include <string>
#include <vector>

namespace polytomo {

// Exit codes are a stable contract: 0 success, 1 parse/usage error,
// 2 unbounded protocol (informationally incomplete), 3 empty confidence
// region, 4 internal error.
int run_cli(const std::vector<std::string>& args);
int run_cli(int argc, const char* const* argv);

}  // namespace polytomo
