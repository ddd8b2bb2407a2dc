#pragma once

#include <ostream>

namespace decide::cli {

/// Exit status: 0 ok (detect: no issues), 1 usage or operational error,
/// 2 detect found issues, 3 detect found no solution.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace decide::cli
