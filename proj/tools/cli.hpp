#pragma once

#include <string>
#include <vector>

namespace qdnls::cli {

// Exit codes: 0 success, 2 validation error, 3 numerical failure. Errors are
// also written as JSON to stderr and to <out>/error.json.
int run(int argc, const char* const* argv);
int run(const std::vector<std::string>& args);  // args[0] is the program name

}  // namespace qdnls::cli
