#pragma once

#include <ostream>

namespace pmme {

/// Entry point of the `pmme` command. Human-readable output goes to `out`;
/// on failure a JSON error record goes to `err` and the status is nonzero
/// (1 for runtime errors, 2 for usage errors).
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace pmme
