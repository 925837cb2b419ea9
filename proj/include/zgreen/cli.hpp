#pragma once

#include <iostream>
#include <string>
#include <vector>

namespace zgreen {

/// Command dispatch for the zgreen tool. args excludes the program name.
/// Returns the process exit code: 0 ok, 1 usage/parse error, 2 no dichotomy,
/// 3 unsolvable or infeasible, 4 verification failure.
int run_cli(const std::vector<std::string>& args, std::ostream& out = std::cout,
            std::ostream& err = std::cerr);

}  // namespace zgreen
