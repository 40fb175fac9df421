#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace bodymass::cli {

/// Entry point shared by the executable and the tests. Returns the exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace bodymass::cli
