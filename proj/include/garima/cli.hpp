#pragma once

#include <iosfwd>

namespace garima {

/// Entry point of the `galerkin_arima` tool. Data goes to `out` (or files),
/// diagnostics to `err`. Returns 0 on success, 2 on argument errors and 1 on
/// runtime failures.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace garima
