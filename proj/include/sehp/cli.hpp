#pragma once

#include <string>
#include <vector>

namespace sehp::cli {

// Exit codes: 0 ok, 2 input error, 3 validation error, 4 runtime failure.
int run(const std::vector<std::string>& args);

}  // namespace sehp::cli
