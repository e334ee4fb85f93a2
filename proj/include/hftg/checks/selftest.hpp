#pragma once

#include <ostream>

namespace hftg::checks {

// Fast property checks across all modules; prints one line per check, true when all pass.
bool run_selftest(std::ostream& out);

}  // namespace hftg::checks
